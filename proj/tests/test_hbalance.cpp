#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sosbound/dynsys.hpp"
#include "sosbound/hbalance.hpp"
#include "sosbound/polynomial.hpp"

using namespace sosbound;
using Catch::Approx;

namespace {

double duffing_residual(const DuffingHb& p, double omega, double r) {
    const double u = r * r;
    const double a = omega * omega - p.alpha - 0.75 * p.beta * u;
    return (a * a + p.delta * p.delta * omega * omega) * u - p.force * p.force;
}

/// First-harmonic (describing function) coefficient of cos^n psi for odd n:
/// the cos(psi) coefficient of cos^n is C(n, (n-1)/2) / 2^(n-1).
double cos_power_first_harmonic(int n) {
    double binom = 1.0;
    for (int k = 1; k <= (n - 1) / 2; ++k) binom = binom * (n - k + 1) / k;
    return binom / std::pow(2.0, n - 1);
}

}  // namespace

TEST_CASE("Duffing response: degenerate and analytic cases") {
    const DuffingHb base{0.1, 1.0, 0.04, 1.0};

    DuffingHb off = base;
    off.force = 0.0;
    const auto none = duffing_response(off, 1.0);
    REQUIRE(none.amplitudes.size() == 1);
    CHECK(none.amplitudes[0] == 0.0);

    // Linear resonance: beta = 0 gives R = F/(delta*omega) at omega = alpha = 1.
    DuffingHb linear = base;
    linear.beta = 0.0;
    const auto lin = duffing_response(linear, 1.0);
    REQUIRE(lin.amplitudes.size() == 1);
    CHECK(std::abs(lin.amplitudes[0] - 10.0) < 1e-9);
}

TEST_CASE("Duffing response roots satisfy the implicit cubic to 1e-10") {
    const DuffingHb p{0.1, 1.0, 0.04, 1.0};
    for (double w = 0.2; w <= 2.01; w += 0.03) {
        const auto point = duffing_response(p, w);
        REQUIRE((point.amplitudes.size() == 1 || point.amplitudes.size() == 3));
        CHECK((point.regime == ResponseRegime::MultiValued) ==
              (point.amplitudes.size() > 1));
        for (double r : point.amplitudes)
            CHECK(std::abs(duffing_residual(p, w, r)) <
                  1e-10 * std::max(1.0, p.force * p.force));
    }
}

TEST_CASE("Duffing multivalued window found by the discriminant-style scan") {
    const DuffingHb p{0.1, 1.0, 0.04, 1.0};
    const auto windows = duffing_multivalued_windows(p, 0.2, 2.0, 0.01);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].first > 1.0);
    CHECK(windows[0].second < 2.0);
    // The three-branch frequency named in the toolbox examples sits inside.
    CHECK(duffing_response(p, 1.3).amplitudes.size() == 3);
    CHECK(windows[0].first <= 1.3);
    CHECK(windows[0].second >= 1.3);
}

TEST_CASE("stiffening tilts the Duffing peak right of the linear resonance") {
    const DuffingHb p{0.1, 1.0, 0.04, 1.0};
    double peak_w = 0.0, peak_r = 0.0;
    for (double w = 0.5; w <= 2.0; w += 0.002) {
        const auto point = duffing_response(p, w);
        for (double r : point.amplitudes) {
            if (r > peak_r) {
                peak_r = r;
                peak_w = w;
            }
        }
    }
    CHECK(peak_w > 1.05);  // beta > 0: response curve leans right
}

TEST_CASE("response depends on the forcing amplitude only through F^2") {
    const DuffingHb plus{0.1, 1.0, 0.04, 0.7};
    DuffingHb minus = plus;
    minus.force = -0.7;
    // Negative F is physically the same drive up to phase.
    const auto a = duffing_response(plus, 1.1);
    const auto b = duffing_response(minus, 1.1);
    REQUIRE(a.amplitudes.size() == b.amplitudes.size());
    for (size_t i = 0; i < a.amplitudes.size(); ++i)
        CHECK(a.amplitudes[i] == Approx(b.amplitudes[i]).margin(1e-12));
}

TEST_CASE("branch continuity along a fine sweep away from folds") {
    const DuffingHb p{0.1, 1.0, 0.04, 1.0};
    std::vector<double> prev;
    int jumps = 0;
    for (double w = 0.2; w <= 2.0 + 1e-9; w += 1e-3) {
        const auto point = duffing_response(p, w);
        if (!prev.empty() && prev.size() == point.amplitudes.size()) {
            for (size_t i = 0; i < prev.size(); ++i) {
                if (std::abs(point.amplitudes[i] - prev[i]) >= 0.1) ++jumps;
            }
        }
        prev = point.amplitudes;
    }
    CHECK(jumps == 0);  // branch births/deaths only at fold crossings
}

TEST_CASE("seventh-order pendulum relation matches an independent re-derivation") {
    // Re-derive the implicit relation by projecting the Taylor sine onto the
    // first harmonic: sin_7(R cos psi) ~ N(u) R cos psi with
    // N(u) = 1 - u/8 + u^2/192 - u^3/9216, u = R^2, assembled directly from
    // the Taylor coefficients and the cos^n first-harmonic table; then
    // [(N - w^2)^2 + (gamma w)^2] u - F^2 must equal the printed formula.
    const double taylor[4] = {1.0, -1.0 / 6.0, 1.0 / 120.0, -1.0 / 5040.0};
    // Build N as a polynomial in u (variable 0) and w2 (variable 1).
    const int n = 2;
    Polynomial big_n(n);
    for (int k = 0; k < 4; ++k) {
        const int power = 2 * k + 1;  // sin term theta^(2k+1)
        const double coeff = taylor[k] * cos_power_first_harmonic(power);
        // theta = R cos psi contributes R^(2k+1) = R * u^k.
        big_n = big_n + Polynomial::term(n, Monomial::variable(0, k), coeff);
    }
    const Polynomial u = Polynomial::variable(n, 0);
    const Polynomial w2 = Polynomial::variable(n, 1);
    const double gamma = 0.37;  // arbitrary test value, kept symbolic in w2
    const Polynomial rederived =
        ((big_n - w2) * (big_n - w2) + w2 * (gamma * gamma)) * u;

    // Coefficient-by-coefficient comparison against the literal printed form,
    // via evaluation on a grid dense enough to pin a degree-(7,2) polynomial.
    for (double uu : {0.0, 0.3, 1.1, 2.7, 4.9, 7.3, 9.8, 11.6}) {
        for (double ww : {0.3, 0.8, 1.0, 1.7}) {
            const double lhs = rederived.evaluate(std::vector<double>{uu, ww * ww});
            const double rhs = pendulum_implicit_literal(uu, gamma, ww, 0.0);
            CHECK(lhs == Approx(rhs).margin(1e-9 * std::max(1.0, std::abs(rhs))));
        }
    }
    // And N itself has the expected closed-form coefficients.
    CHECK(big_n.coefficient(Monomial::unit()) == Approx(1.0));
    CHECK(big_n.coefficient(Monomial::variable(0, 1)) == Approx(-1.0 / 8.0));
    CHECK(big_n.coefficient(Monomial::variable(0, 2)) == Approx(1.0 / 192.0));
    CHECK(big_n.coefficient(Monomial::variable(0, 3)) == Approx(-1.0 / 9216.0));
}

TEST_CASE("pendulum response: trivial, linearized and root-residual checks") {
    const PendulumHb p{0.1, 0.0, false};
    const auto none = pendulum_response(p, 1.0);
    REQUIRE(none.amplitudes.size() == 1);
    CHECK(none.amplitudes[0] == 0.0);

    // Small forcing far from resonance approaches the linear response.
    PendulumHb weak{0.1, 0.02, false};
    for (double w : {0.4, 1.7}) {
        const auto point = pendulum_response(weak, w);
        REQUIRE(point.amplitudes.size() >= 1);
        const double linear =
            weak.force / std::sqrt(std::pow(1.0 - w * w, 2) + std::pow(weak.gamma * w, 2));
        CHECK(point.amplitudes[0] == Approx(linear).epsilon(0.05));
    }

    PendulumHb strong{0.1, 0.15, false};
    for (double w = 0.6; w <= 1.4; w += 0.05) {
        const auto point = pendulum_response(strong, w);
        for (double r : point.amplitudes) {
            const double res = pendulum_implicit_literal(r * r, strong.gamma, w, strong.force);
            CHECK(std::abs(res) < 1e-10 * std::max(1.0, strong.force * strong.force));
        }
    }
}

TEST_CASE("pendulum softening tilts the response peak left") {
    const PendulumHb p{0.1, 0.2, false};
    double peak_w = 0.0, peak_r = 0.0;
    for (double w = 0.4; w <= 1.4; w += 0.002) {
        const auto point = pendulum_response(p, w);
        for (double r : point.amplitudes) {
            if (r > peak_r) {
                peak_r = r;
                peak_w = w;
            }
        }
    }
    CHECK(peak_w < 0.98);  // softening nonlinearity leans the curve left
}

TEST_CASE("mean energy under the single-harmonic ansatz") {
    FrequencyResponsePoint rest;
    rest.omega = 1.0;
    rest.amplitudes = {0.0};
    const PendulumHb about0{0.1, 0.1, false};
    CHECK(hb_mean_energy(rest, about0)[0] == Approx(-1.0).margin(1e-12));

    // Small amplitude: E = -1 + R^2 (1 + w^2)/4 + O(R^4).
    FrequencyResponsePoint small;
    small.omega = 0.8;
    small.amplitudes = {0.05, 0.1};
    const auto e = hb_mean_energy(small, about0);
    for (size_t i = 0; i < small.amplitudes.size(); ++i) {
        const double r = small.amplitudes[i];
        const double expected = -1.0 + r * r * (small.omega * small.omega + 1.0) / 4.0;
        CHECK(e[i] == Approx(expected).margin(1e-5));
    }

    // About pi the potential average flips to the high-energy branch.
    const PendulumHb aboutpi{0.1, 0.1, true};
    FrequencyResponsePoint top = rest;
    CHECK(hb_mean_energy(top, aboutpi)[0] == Approx(1.0).margin(1e-12));
    FrequencyResponsePoint swing;
    swing.omega = 1.0;
    swing.amplitudes = {0.3};
    CHECK(hb_mean_energy(swing, aboutpi)[0] > 0.9);
}
