#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sosbound/dynsys.hpp"

namespace sosbound {

/// Dense fixed-step trajectory: states[k] is the state at times[k].
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

/// Finite-horizon estimate of a long-time average of an observable.
struct TrajectoryAverage {
    std::vector<double> initial_condition;
    double t_transient = 0.0;
    double t_average = 0.0;
    double dt = 0.0;
    double value = 0.0;
};

inline constexpr double kDivergenceNorm = 1e8;

/// Classical fixed-step RK4 with dense output at every step. Throws
/// DivergenceError (with the escape time) if the state norm passes 1e8.
Trajectory integrate(const DynSystem& sys, std::span<const double> x0, double t_end, double dt);

/// Streaming RK4: calls on_step(t, state) after every accepted step,
/// including the initial state. Used by the averaging routines to avoid
/// materializing long trajectories.
void integrate_steps(const DynSystem& sys, std::span<const double> x0, double t_end, double dt,
                     const std::function<void(double, std::span<const double>)>& on_step);

/// Trapezoidal time average of phi over [t_transient, t_transient+t_average].
/// When snap_period is given, t_average is rounded to the nearest positive
/// integer multiple of it so that periodic observables average cleanly.
TrajectoryAverage time_average(const DynSystem& sys, const Polynomial& phi,
                               std::span<const double> x0, double t_transient, double t_average,
                               double dt, std::optional<double> snap_period = std::nullopt);

}  // namespace sosbound
