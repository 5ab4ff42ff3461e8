#include "sosbound/hbalance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace sosbound {

namespace {

constexpr double kRootSeparation = 1e-8;

/// Newton polish with bisection fallback inside a bracketing interval.
double polish_root(const std::function<double(double)>& f, const std::function<double(double)>& df,
                   double lo, double hi) {
    double flo = f(lo);
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double fu = f(u);
        if (fu == 0.0) return u;
        if ((fu < 0.0) == (flo < 0.0)) {
            lo = u;
            flo = fu;
        } else {
            hi = u;
        }
        double d = df(u);
        double step = d != 0.0 ? fu / d : 0.0;
        double next = u - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) < 1e-16 * std::max(1.0, std::abs(u))) return next;
        u = next;
    }
    return u;
}

void sort_collapse(std::vector<double>& roots) {
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < kRootSeparation; }),
                roots.end());
}

}  // namespace

FrequencyResponsePoint duffing_response(const DuffingHb& p, double omega) {
    if (!(p.force >= 0.0) || !(p.delta > 0.0) || !(omega > 0.0))
        throw std::invalid_argument("duffing_response: need F >= 0, delta > 0, omega > 0");

    const double detune = omega * omega - p.alpha;
    const double damp2 = p.delta * p.delta * omega * omega;
    const double f2 = p.force * p.force;
    // g(u) = ((detune - 0.75 beta u)^2 + damp2) u - F^2, u = R^2.
    auto g = [&](double u) {
        const double a = detune - 0.75 * p.beta * u;
        return (a * a + damp2) * u - f2;
    };
    auto dg = [&](double u) {
        const double a = detune - 0.75 * p.beta * u;
        return a * a + damp2 - 1.5 * p.beta * a * u;
    };

    FrequencyResponsePoint out;
    out.omega = omega;
    std::vector<double> roots;

    if (p.force == 0.0) {
        roots.push_back(0.0);
    } else if (p.beta == 0.0) {
        roots.push_back(f2 / (detune * detune + damp2));
    } else {
        // Bracket between stationary points of the cubic, then scan outward.
        const double c3 = 0.5625 * p.beta * p.beta;
        const double c2 = -1.5 * p.beta * detune;
        const double c1 = detune * detune + damp2;
        std::vector<double> nodes{0.0};
        const double disc = c2 * c2 - 3.0 * c3 * c1;
        if (disc > 0.0) {
            const double s = std::sqrt(disc);
            for (double crit : {(-c2 - s) / (3.0 * c3), (-c2 + s) / (3.0 * c3)}) {
                if (crit > 0.0) nodes.push_back(crit);
            }
        }
        // Upper bound where the cubic is surely positive.
        double hi = std::max(1.0, nodes.back() * 2.0 + 1.0);
        while (g(hi) <= 0.0) hi *= 2.0;
        nodes.push_back(hi);
        std::sort(nodes.begin(), nodes.end());
        for (size_t i = 0; i + 1 < nodes.size(); ++i) {
            const double a = nodes[i], b = nodes[i + 1];
            if (b - a < 1e-15) continue;
            if ((g(a) < 0.0) != (g(b) < 0.0)) roots.push_back(polish_root(g, dg, a, b));
        }
    }

    sort_collapse(roots);
    for (double u : roots) out.amplitudes.push_back(std::sqrt(std::max(0.0, u)));
    out.regime =
        out.amplitudes.size() > 1 ? ResponseRegime::MultiValued : ResponseRegime::SingleValued;
    return out;
}

bool duffing_multivalued(const DuffingHb& p, double omega) {
    return duffing_response(p, omega).regime == ResponseRegime::MultiValued;
}

std::vector<std::pair<double, double>> duffing_multivalued_windows(const DuffingHb& p,
                                                                   double omega_lo, double omega_hi,
                                                                   double step) {
    if (!(step > 0.0) || !(omega_hi >= omega_lo))
        throw std::invalid_argument("duffing_multivalued_windows: bad range");
    std::vector<std::pair<double, double>> windows;
    bool inside = false;
    double start = 0.0, last = omega_lo;
    for (double w = omega_lo; w <= omega_hi + 0.5 * step; w += step) {
        const bool multi = duffing_multivalued(p, w);
        if (multi && !inside) {
            inside = true;
            start = w;
        } else if (!multi && inside) {
            inside = false;
            windows.emplace_back(start, last);
        }
        last = w;
    }
    if (inside) windows.emplace_back(start, last);
    return windows;
}

double pendulum_implicit_literal(double u, double gamma, double omega, double force) {
    // Grouped exactly as printed: P(u) = u^3 + 1152 u - 48 u^2 - 9216.
    const double poly = u * u * u + 1152.0 * u - 48.0 * u * u - 9216.0;
    const double w2 = omega * omega;
    return u * poly * poly / 84934656.0 + u * w2 * w2 +
           u * (u * u * u + 4608.0 * (gamma * gamma - 2.0) + 1152.0 * u - 48.0 * u * u) * w2 /
               4608.0 -
           force * force;
}

namespace {

/// Describing-function form of the same relation; the about-pi variant flips
/// the sign of the linearized restoring force.
double pendulum_implicit(double u, const PendulumHb& p, double omega) {
    const double n = 1.0 - u / 8.0 + u * u / 192.0 - u * u * u / 9216.0;
    const double w2 = omega * omega;
    const double detune = p.about_pi ? (n + w2) : (n - w2);
    return (detune * detune + p.gamma * p.gamma * w2) * u - p.force * p.force;
}

double pendulum_implicit_derivative(double u, const PendulumHb& p, double omega) {
    const double n = 1.0 - u / 8.0 + u * u / 192.0 - u * u * u / 9216.0;
    const double dn = -1.0 / 8.0 + u / 96.0 - u * u / 3072.0;
    const double w2 = omega * omega;
    const double detune = p.about_pi ? (n + w2) : (n - w2);
    return detune * detune + p.gamma * p.gamma * w2 + 2.0 * detune * dn * u;
}

}  // namespace

FrequencyResponsePoint pendulum_response(const PendulumHb& p, double omega) {
    if (!(p.gamma > 0.0) || !(p.force >= 0.0) || !(omega > 0.0))
        throw std::invalid_argument("pendulum_response: need gamma > 0, F >= 0, omega > 0");

    FrequencyResponsePoint out;
    out.omega = omega;
    std::vector<double> roots;
    if (p.force == 0.0) {
        roots.push_back(0.0);
    } else {
        // Amplitudes beyond ~pi are outside the truncated expansion's reach.
        const double u_max = 1.2 * M_PI * M_PI;
        const int n_scan = 4096;
        auto g = [&](double u) { return pendulum_implicit(u, p, omega); };
        auto dg = [&](double u) { return pendulum_implicit_derivative(u, p, omega); };
        double prev_u = 0.0, prev_g = g(0.0);
        for (int i = 1; i <= n_scan; ++i) {
            const double u = u_max * i / n_scan;
            const double gu = g(u);
            if ((gu < 0.0) != (prev_g < 0.0)) roots.push_back(polish_root(g, dg, prev_u, u));
            prev_u = u;
            prev_g = gu;
        }
    }
    sort_collapse(roots);
    for (double u : roots) out.amplitudes.push_back(std::sqrt(std::max(0.0, u)));
    out.regime =
        out.amplitudes.size() > 1 ? ResponseRegime::MultiValued : ResponseRegime::SingleValued;
    return out;
}

std::vector<double> hb_mean_energy(const FrequencyResponsePoint& point, const PendulumHb& p) {
    std::vector<double> energies;
    energies.reserve(point.amplitudes.size());
    const int n_panels = 1024;  // composite Simpson over one period
    for (double r : point.amplitudes) {
        const double kinetic = 0.25 * point.omega * point.omega * r * r;
        auto potential = [&](double psi) {
            const double theta = p.about_pi ? M_PI - r * std::cos(psi) : r * std::cos(psi);
            return -std::cos(theta);
        };
        double sum = potential(0.0) + potential(2.0 * M_PI);
        for (int i = 1; i < n_panels; ++i) {
            const double psi = 2.0 * M_PI * i / n_panels;
            sum += (i % 2 == 1 ? 4.0 : 2.0) * potential(psi);
        }
        const double mean_potential = sum / (3.0 * n_panels);
        energies.push_back(kinetic + mean_potential);
    }
    return energies;
}

}  // namespace sosbound
