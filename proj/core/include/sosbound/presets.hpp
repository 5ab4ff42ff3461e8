#pragma once

#include "sosbound/dynsys.hpp"

namespace sosbound {

/// One-dimensional bistable cubic x' = x - x^3.
DynSystem cubic1d();

struct DuffingParams {
    double delta = 0.1;
    double alpha = 1.0;
    double beta = 0.04;
    double force = 1.0;
    double omega = 1.2;
};

/// Damped driven Duffing oscillator x'' + delta x' + alpha x + beta x^3 =
/// F cos(omega t) as a 2-state forced system (drive enters y' with the cosine
/// carried by z2 after autonomization).
ForcedSystem duffing_forced(const DuffingParams& p);

/// The 4-state autonomized Duffing system over (x, y, z1, z2). Metadata holds
/// the parameters and per-variable scale hints for the bound engine.
DynSystem duffing_lifted(const DuffingParams& p, bool stabilize = false);

/// Observable x^2 on the lifted Duffing system.
Polynomial duffing_observable(const DynSystem& lifted);

struct PendulumParams {
    double gamma = 0.1;
    double force = 0.1;
    double omega = 1.0;
};

/// Damped driven pendulum theta'' + gamma theta' + sin(theta) = F cos(omega t)
/// lifted to the 5-state polynomial system over (phi, psi1, psi2, z1, z2)
/// where phi = theta', psi1 = sin(theta), psi2 = cos(theta) and the drive is
/// carried by z1.
DynSystem pendulum_lifted(const PendulumParams& p, bool stabilize = false);

/// Mechanical energy 0.5 phi^2 - psi2 on the lifted pendulum system.
Polynomial pendulum_energy(const DynSystem& lifted);

/// Bound observable 0.5 phi^2 - psi2 + z1^2 on the lifted pendulum system.
Polynomial pendulum_observable(const DynSystem& lifted);

/// Append the absorbing-ball inequality rho2 - sum (x_i/s_i)^2 >= 0, with s_i
/// taken from the system's scale hints (1 when absent). The ball makes the
/// constraint set Archimedean, which the degree-escalation guarantee assumes
/// and the interior-point solve needs for bounded moments; choose rho2 so the
/// ball contains the attractor in scaled coordinates.
DynSystem with_absorbing_ball(DynSystem sys, double rho2 = 8.0);

}  // namespace sosbound
