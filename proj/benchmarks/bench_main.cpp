#include <benchmark/benchmark.h>

#include <random>

#include "sosbound/bound.hpp"
#include "sosbound/presets.hpp"
#include "sosbound/simulate.hpp"

namespace {

sosbound::Polynomial random_poly(int nvars, int degree, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    sosbound::Polynomial::TermMap terms;
    for (const auto& m : sosbound::monomial_basis(nvars, degree)) terms[m] = coeff(rng);
    return sosbound::Polynomial(nvars, std::move(terms));
}

void BM_PolynomialMultiply(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    const sosbound::Polynomial p = random_poly(3, degree, 1);
    const sosbound::Polynomial q = random_poly(3, degree, 2);
    for (auto _ : state) benchmark::DoNotOptimize(p * q);
}
BENCHMARK(BM_PolynomialMultiply)->Arg(4)->Arg(8)->Arg(12);

void BM_DuffingBoundProgramBuild(benchmark::State& state) {
    const int degree = static_cast<int>(state.range(0));
    sosbound::BoundQuery q;
    q.system = sosbound::duffing_lifted({});
    q.observable = sosbound::duffing_observable(q.system);
    q.v_degree = degree;
    for (auto _ : state) benchmark::DoNotOptimize(sosbound::build_program(q));
}
BENCHMARK(BM_DuffingBoundProgramBuild)->Arg(4)->Arg(6);

void BM_CubicBoundSolve(benchmark::State& state) {
    sosbound::BoundQuery q;
    q.system = sosbound::cubic1d();
    q.observable = sosbound::Polynomial::variable(1, 0).pow(2);
    q.v_degree = 2;
    for (auto _ : state) benchmark::DoNotOptimize(sosbound::bound(q));
}
BENCHMARK(BM_CubicBoundSolve);

void BM_DuffingRk4Average(benchmark::State& state) {
    const sosbound::DynSystem sys = sosbound::duffing_lifted({});
    const sosbound::Polynomial phi = sosbound::duffing_observable(sys);
    const std::vector<double> x0{0.5, 0.0, 0.0, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(sosbound::time_average(sys, phi, x0, 10.0, 40.0, 1e-3));
}
BENCHMARK(BM_DuffingRk4Average);

}  // namespace

BENCHMARK_MAIN();
