#include "sosbound/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "sosbound/errors.hpp"

namespace sosbound {

namespace {

/// Flat term list for fast repeated evaluation inside the integrator loop.
struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<std::pair<int, int>> factors;
    };
    std::vector<Term> terms;

    static CompiledPoly from(const Polynomial& p) {
        CompiledPoly c;
        c.terms.reserve(p.terms().size());
        for (const auto& [m, coeff] : p.terms()) c.terms.push_back({coeff, m.factors()});
        return c;
    }

    double eval(std::span<const double> x) const {
        double value = 0.0;
        for (const auto& t : terms) {
            double prod = t.coeff;
            for (const auto& [v, e] : t.factors) {
                double base = x[v];
                int n = e;
                double acc = 1.0;
                while (n > 0) {
                    if (n & 1) acc *= base;
                    base *= base;
                    n >>= 1;
                }
                prod *= acc;
            }
            value += prod;
        }
        return value;
    }
};

struct CompiledField {
    std::vector<CompiledPoly> components;

    explicit CompiledField(const DynSystem& sys) {
        components.reserve(sys.field.size());
        for (const auto& f : sys.field) components.push_back(CompiledPoly::from(f));
    }

    void eval(std::span<const double> x, std::vector<double>& out) const {
        for (size_t i = 0; i < components.size(); ++i) out[i] = components[i].eval(x);
    }
};

double sup_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

void integrate_steps(const DynSystem& sys, std::span<const double> x0, double t_end, double dt,
                     const std::function<void(double, std::span<const double>)>& on_step) {
    sys.validate();
    const int d = sys.dimension();
    if (static_cast<int>(x0.size()) != d)
        throw DimensionMismatchError("integrate: initial condition length != dimension");
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("integrate: need dt > 0");

    const CompiledField field(sys);
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);

    const auto steps = static_cast<long long>(std::llround(t_end / dt));
    on_step(0.0, x);
    for (long long s = 1; s <= steps; ++s) {
        field.eval(x, k1);
        for (int i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
        field.eval(tmp, k2);
        for (int i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
        field.eval(tmp, k3);
        for (int i = 0; i < d; ++i) tmp[i] = x[i] + dt * k3[i];
        field.eval(tmp, k4);
        for (int i = 0; i < d; ++i)
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double t = s * dt;
        if (sup_norm(x) > kDivergenceNorm || !std::isfinite(x[0])) throw DivergenceError(t);
        on_step(t, x);
    }
}

Trajectory integrate(const DynSystem& sys, std::span<const double> x0, double t_end, double dt) {
    Trajectory traj;
    const auto steps = static_cast<size_t>(std::llround(t_end / dt)) + 1;
    traj.times.reserve(steps);
    traj.states.reserve(steps);
    integrate_steps(sys, x0, t_end, dt, [&](double t, std::span<const double> x) {
        traj.times.push_back(t);
        traj.states.emplace_back(x.begin(), x.end());
    });
    return traj;
}

TrajectoryAverage time_average(const DynSystem& sys, const Polynomial& phi,
                               std::span<const double> x0, double t_transient, double t_average,
                               double dt, std::optional<double> snap_period) {
    if (phi.nvars() != sys.dimension())
        throw DimensionMismatchError("time_average: observable nvars != dimension");
    if (!(t_average > 0.0)) throw std::invalid_argument("time_average: need t_average > 0");
    if (snap_period && *snap_period > 0.0) {
        const double k = std::max(1.0, std::round(t_average / *snap_period));
        t_average = k * *snap_period;
    }

    const CompiledPoly obs = CompiledPoly::from(phi);
    const double t_end = t_transient + t_average;
    double integral = 0.0;
    double prev_value = 0.0;
    double first_t = 0.0, prev_t = 0.0;
    bool have_prev = false;

    integrate_steps(sys, x0, t_end, dt, [&](double t, std::span<const double> x) {
        if (t + 1e-12 < t_transient) return;
        const double value = obs.eval(x);
        if (have_prev) {
            integral += 0.5 * (value + prev_value) * (t - prev_t);
        } else {
            first_t = t;
        }
        prev_value = value;
        prev_t = t;
        have_prev = true;
    });
    if (!have_prev || prev_t <= first_t)
        throw std::invalid_argument("time_average: window too short for the step size");

    TrajectoryAverage avg;
    avg.initial_condition.assign(x0.begin(), x0.end());
    avg.t_transient = t_transient;
    avg.t_average = t_average;
    avg.dt = dt;
    avg.value = integral / (prev_t - first_t);
    if (!std::isfinite(avg.value)) throw std::runtime_error("time_average: non-finite average");
    return avg;
}

}  // namespace sosbound
