#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "sosbound/errors.hpp"
#include "sosbound/polynomial.hpp"

using namespace sosbound;
using Catch::Approx;

namespace {

Polynomial x_poly(int nvars = 1) { return Polynomial::variable(nvars, 0); }

Polynomial random_poly(int nvars, int degree, std::mt19937& rng, double density = 0.6) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> keep(0.0, 1.0);
    Polynomial::TermMap terms;
    for (const auto& m : monomial_basis(nvars, degree)) {
        if (keep(rng) < density) terms[m] = coeff(rng);
    }
    return Polynomial(nvars, std::move(terms));
}

/// Brute-force product: expand term by term into a plain map keyed by dense
/// exponent tuples, independent of Polynomial's own arithmetic.
Polynomial naive_product(const Polynomial& p, const Polynomial& q) {
    std::map<std::vector<int>, double> acc;
    const int n = p.nvars();
    auto dense = [n](const Monomial& m) {
        std::vector<int> e(n, 0);
        for (const auto& [v, k] : m.factors()) e[v] = k;
        return e;
    };
    for (const auto& [ma, ca] : p.terms()) {
        for (const auto& [mb, cb] : q.terms()) {
            std::vector<int> e = dense(ma);
            const std::vector<int> eb = dense(mb);
            for (int i = 0; i < n; ++i) e[i] += eb[i];
            acc[e] += ca * cb;
        }
    }
    Polynomial::TermMap terms;
    for (const auto& [e, c] : acc) terms[Monomial::from_exponents(e)] += c;
    return Polynomial(n, std::move(terms));
}

}  // namespace

TEST_CASE("addition: cancellation, identity and the Gram example polynomial") {
    const Polynomial x2 = x_poly().pow(2);
    CHECK((x2 + Polynomial::constant(1, 1.0) + (-x2)) == Polynomial::constant(1, 1.0));

    std::mt19937 rng(7);
    const Polynomial p = random_poly(3, 4, rng);
    CHECK(p + Polynomial(3) == p);

    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const Polynomial f = x.pow(4) * 2.0 + (y.pow(4) * 5.0 + x.pow(2) * y.pow(2));
    CHECK(f.coefficient(Monomial({{0, 4}})) == 2.0);
    CHECK(f.coefficient(Monomial({{1, 4}})) == 5.0);
    CHECK(f.coefficient(Monomial({{0, 2}, {1, 2}})) == 1.0);
    CHECK(f.terms().size() == 3);
}

TEST_CASE("multiplication matches examples and a brute-force expansion oracle") {
    const Polynomial x = x_poly();
    const Polynomial one = Polynomial::constant(1, 1.0);
    CHECK((x - one) * (x + one) == x.pow(2) - one);

    const Polynomial sq = (x + one).pow(2) * (x - one).pow(2);
    CHECK(sq == x.pow(4) - x.pow(2) * 2.0 + one);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const Polynomial p = random_poly(3, 4, rng);
        const Polynomial q = random_poly(3, 4, rng);
        CHECK((p * q).coeff_distance(naive_product(p, q)) < 1e-12);
    }
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(x_poly(1) + Polynomial::variable(2, 1), DimensionMismatchError);
    CHECK_THROWS_AS(x_poly(1) * Polynomial::variable(2, 1), DimensionMismatchError);
    const std::vector<double> point{1.0, 2.0};
    CHECK_THROWS_AS(x_poly(1).evaluate(point), DimensionMismatchError);
    const std::vector<Polynomial> field{Polynomial(2), Polynomial(2)};
    CHECK_THROWS_AS(lie_derivative(x_poly(1), field), DimensionMismatchError);
}

TEST_CASE("gradient examples") {
    const Polynomial x = x_poly();
    const auto grad = (x.pow(2) * 0.5).gradient();
    REQUIRE(grad.size() == 1);
    CHECK(grad[0] == x);

    CHECK(Polynomial::constant(3, 4.0).gradient()[1].is_zero());

    const Polynomial x1 = Polynomial::variable(2, 0), x2 = Polynomial::variable(2, 1);
    const auto g = (x1 * x2).gradient();
    CHECK(g[0] == x2);
    CHECK(g[1] == x1);
}

TEST_CASE("lie derivative of V = x^2/2 along the cubic flow") {
    const Polynomial x = x_poly();
    const std::vector<Polynomial> field{x - x.pow(3)};
    const Polynomial lie = lie_derivative(x.pow(2) * 0.5, field);
    CHECK(lie == x.pow(2) - x.pow(4));
    CHECK((x.pow(2) + lie) == x.pow(2) * 2.0 - x.pow(4));
    CHECK(lie_derivative(Polynomial::constant(1, 3.0), field).is_zero());
}

TEST_CASE("evaluation: direct values and the ring homomorphism property") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const Polynomial f = x.pow(4) * 2.0 + y.pow(4) * 5.0 + x.pow(2) * y.pow(2);
    CHECK(f.evaluate(std::vector<double>{1.0, 1.0}) == Approx(8.0));

    std::mt19937 rng(23);
    const Polynomial p = random_poly(3, 3, rng);
    CHECK(p.evaluate(std::vector<double>{0.0, 0.0, 0.0}) == Approx(p.constant_term()));

    const Polynomial q = random_poly(3, 3, rng);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> pt{u(rng), u(rng), u(rng)};
        const double lhs = (p * q).evaluate(pt);
        const double rhs = p.evaluate(pt) * q.evaluate(pt);
        CHECK(lhs == Approx(rhs).margin(1e-9 * (1.0 + std::abs(rhs))));
    }
}

TEST_CASE("monomial basis sizes and graded-lex order") {
    const auto b1 = monomial_basis(1, 2);
    REQUIRE(b1.size() == 3);
    CHECK(b1[0].is_unit());
    CHECK(b1[1] == Monomial::variable(0));
    CHECK(b1[2] == Monomial::variable(0, 2));

    CHECK(monomial_basis(2, 2).size() == 6);
    CHECK(monomial_basis(4, 6).size() == 210);

    const auto basis = monomial_basis(3, 4);
    CHECK(basis == monomial_basis(3, 4));
    for (size_t i = 1; i < basis.size(); ++i) CHECK(graded_lex_less(basis[i - 1], basis[i]));

    CHECK(monomial_basis(2, 3, BasisParity::Even).size() == 4);
    CHECK(monomial_basis(2, 3, BasisParity::Odd).size() == 6);
}

TEST_CASE("ring axioms hold on randomized inputs") {
    std::mt19937 rng(0x5eed);
    for (int trial = 0; trial < 1000; ++trial) {
        const Polynomial a = random_poly(2, 3, rng, 0.5);
        const Polynomial b = random_poly(2, 3, rng, 0.5);
        const Polynomial c = random_poly(2, 3, rng, 0.5);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(((a * b) * c).coeff_distance(a * (b * c)) < 1e-10);
        CHECK((a * (b + c)).coeff_distance(a * b + a * c) < 1e-10);
    }
}

TEST_CASE("Leibniz rule term by term") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const Polynomial p = random_poly(3, 3, rng, 0.5);
        const Polynomial q = random_poly(3, 3, rng, 0.5);
        for (int k = 0; k < 3; ++k) {
            const Polynomial lhs = (p * q).derivative(k);
            const Polynomial rhs = p * q.derivative(k) + q * p.derivative(k);
            CHECK(lhs.coeff_distance(rhs) < 1e-10);
        }
    }
}

TEST_CASE("canonical form is order independent and drops tiny coefficients") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const Polynomial built_one_way = (x * y + x.pow(2)) + y.pow(2);
    const Polynomial built_other_way = (y.pow(2) + x.pow(2)) + x * y;
    CHECK(built_one_way == built_other_way);
    CHECK(built_one_way.terms() == built_other_way.terms());

    Polynomial::TermMap tiny;
    tiny[Monomial::variable(0)] = 1e-15;  // below the canonicalization threshold
    tiny[Monomial::variable(1)] = 1.0;
    const Polynomial p(2, std::move(tiny));
    CHECK(p.terms().size() == 1);
    CHECK(p == Polynomial::variable(2, 1));
}

TEST_CASE("print / degree / substitution utilities") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const Polynomial p = x.pow(2) * 2.0 - y + Polynomial::constant(2, 1.0);
    const std::vector<std::string> names{"x", "y"};
    CHECK(p.to_string(names) == "1 - y + 2*x^2");
    CHECK(p.degree() == 2);
    CHECK(Polynomial(2).degree() == -1);

    // theta -> pi - theta substitution used by the about-pi expansion.
    const Polynomial theta = Polynomial::variable(1, 0);
    const Polynomial sub =
        theta.pow(2).substitute(0, Polynomial::constant(1, M_PI) - theta);
    CHECK(sub.evaluate(std::vector<double>{1.0}) == Approx((M_PI - 1.0) * (M_PI - 1.0)));

    const std::vector<double> scales{2.0, 3.0};
    const Polynomial scaled = (x * y).rescale_vars(scales);
    CHECK(scaled.coefficient(Monomial({{0, 1}, {1, 1}})) == Approx(6.0));
}
