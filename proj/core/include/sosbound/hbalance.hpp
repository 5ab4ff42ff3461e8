#pragma once

#include <vector>

namespace sosbound {

enum class ResponseRegime { SingleValued, MultiValued };

/// One point of a frequency response curve: the physical oscillation
/// amplitudes R predicted by single-harmonic balance at a drive frequency.
struct FrequencyResponsePoint {
    double omega = 0.0;
    std::vector<double> amplitudes;  // ascending, all >= 0
    ResponseRegime regime = ResponseRegime::SingleValued;
};

struct DuffingHb {
    double delta = 0.1;
    double alpha = 1.0;
    double beta = 0.04;
    double force = 1.0;
};

/// Roots R of [(omega^2 - alpha - (3/4) beta R^2)^2 + (delta omega)^2] R^2 =
/// F^2, solved as a cubic in u = R^2 by bracketing on the exact cubic and
/// Newton polish. Every returned root has implicit-equation residual below
/// 1e-10 * max(1, F^2).
FrequencyResponsePoint duffing_response(const DuffingHb& p, double omega);

/// Sign of the cubic discriminant at omega: true when three distinct real
/// roots exist (the multivalued window).
bool duffing_multivalued(const DuffingHb& p, double omega);

/// Scan [omega_lo, omega_hi] with the given step and return the maximal
/// intervals where the response is multivalued (fold-bounded windows).
std::vector<std::pair<double, double>> duffing_multivalued_windows(const DuffingHb& p,
                                                                   double omega_lo,
                                                                   double omega_hi, double step);

struct PendulumHb {
    double gamma = 0.1;
    double force = 0.1;
    bool about_pi = false;
};

/// Roots of the 7th-order-sine harmonic balance relation for the driven
/// pendulum, scanned and bisected in u = R^2 over [0, 1.2*pi^2]. With
/// about_pi the expansion is taken around the inverted position.
FrequencyResponsePoint pendulum_response(const PendulumHb& p, double omega);

/// Evaluate the about-0 implicit relation exactly as printed (grouped P(u)
/// polynomial over the 84934656 and 4608 denominators); used for root
/// residuals and as the transcription reference in tests.
double pendulum_implicit_literal(double u, double gamma, double omega, double force);

/// Period-mean mechanical energy 0.5 theta'^2 - cos(theta) for each amplitude
/// root under the single-harmonic ansatz; the cosine average is evaluated by
/// composite-Simpson quadrature over one period.
std::vector<double> hb_mean_energy(const FrequencyResponsePoint& point, const PendulumHb& p);

}  // namespace sosbound
