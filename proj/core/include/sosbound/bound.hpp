#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sosbound/dynsys.hpp"
#include "sosbound/sos_to_sdp.hpp"

namespace sosbound {

enum class BoundDirection { Upper, Lower };

/// A request for a rigorous bound on the long-time average of `observable`
/// along trajectories of `system` staying in its constraint set.
struct BoundQuery {
    DynSystem system;
    Polynomial observable;
    BoundDirection direction = BoundDirection::Upper;
    int v_degree = 4;
    /// -1 = auto: certificate degree minus constraint degree, floored to even.
    int multiplier_degree = -1;
    double sharpness_tol = 1e-6;
    int max_degree = 12;
    /// Per-variable scales for conditioning; empty = metadata "scale:<name>"
    /// entries, defaulting to 1. Bounds are invariant to this choice.
    std::vector<double> var_scales;
    SdpOptions sdp;
};

struct BoundResult {
    double bound = 0.0;
    BoundDirection direction = BoundDirection::Upper;
    int v_degree = 0;
    Polynomial v;  // auxiliary function, original coordinates
    /// One multiplier per constraint: inequalities first (SOS multipliers),
    /// then equalities (free multipliers), in constraint-set order.
    std::vector<Polynomial> multipliers;
    SdpStatus status = SdpStatus::NumericalFailure;
    double sdp_gap = 0.0;
    int sdp_iterations = 0;
    /// Inf-norm coefficient residual of the certificate identity in the
    /// scaled coordinates the program was posed in.
    double certificate_residual = 0.0;
    std::vector<std::pair<int, double>> escalation_trace;  // (degree, bound)
    /// Set when the SDP reports infeasibility (raise v_degree).
    bool degree_too_low = false;

    bool ok() const noexcept { return status == SdpStatus::Optimal; }
};

/// Assembled program plus the bookkeeping needed to read certificates back.
struct BuiltBoundProgram {
    SosProgram program;
    DynSystem scaled_system;
    Polynomial scaled_observable;  // direction already applied (negated = Lower)
    std::vector<double> scales;
    int u_var = 0;
    std::vector<std::pair<int, Monomial>> v_coeffs;  // decision id, V monomial
    std::vector<SProcedureResult::FreeCoeff> free_coeffs;
    /// (index into program.gram_blocks, constraint index among inequalities).
    std::vector<std::pair<int, int>> sos_multiplier_blocks;
    int certified_degree = 0;
    SignSymmetry symmetry;
    int num_inequalities = 0;
    int num_equalities = 0;
};

BuiltBoundProgram build_bound_program(const BoundQuery& q);

/// The SOS program for the query (decision variables U, V coefficients and
/// multiplier coefficients; objective min U).
SosProgram build_program(const BoundQuery& q);

/// Solve the bound program at the query's degree.
BoundResult bound(const BoundQuery& q);

/// Solve at v_degree, v_degree+2, ... until successive bounds agree to
/// sharpness_tol (relative) or max_degree is reached.
BoundResult escalate(const BoundQuery& q);

/// Diagnostic values of Phi + f.grad(V) on a grid of points (one per row of
/// `points`); extremal trajectories concentrate where this nears the bound.
std::vector<double> extremal_diagnostic(const BoundQuery& q, const BoundResult& r,
                                        const std::vector<std::vector<double>>& points);

}  // namespace sosbound
