#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sosbound/polynomial.hpp"

namespace sosbound {

/// Region description: the set where every inequality polynomial is >= 0 and
/// every equality polynomial is == 0. Stored as lists, compared as multisets.
struct SemialgebraicSet {
    std::vector<Polynomial> inequalities;
    std::vector<Polynomial> equalities;

    bool empty() const noexcept { return inequalities.empty() && equalities.empty(); }
    bool same_set(const SemialgebraicSet& other) const;
};

/// Autonomous polynomial vector field with named state variables and an
/// invariant semialgebraic constraint set.
struct DynSystem {
    std::vector<std::string> var_names;
    std::vector<Polynomial> field;
    SemialgebraicSet constraint_set;
    std::map<std::string, double> metadata;

    int dimension() const noexcept { return static_cast<int>(var_names.size()); }
    int var_index(std::string_view name) const;
    /// Checks field length and nvars consistency of every polynomial.
    void validate() const;
};

/// Which of the appended rotator variables carries F*cos(omega*t). Both are
/// valid up to the (irrelevant) drive phase; the choice only fixes which
/// printed form of the lifted equations is produced.
enum class ForcingCarrier { CosInZ2, CosInZ1 };

/// A base system driven by F*cos(omega*t) entering linearly in selected
/// field components.
struct ForcedSystem {
    DynSystem base;
    double amplitude = 0.0;   // F >= 0
    double frequency = 1.0;   // omega > 0
    /// (component index, coefficient): component receives coeff*F*cos(omega t).
    std::vector<std::pair<int, double>> forcing;
    ForcingCarrier carrier = ForcingCarrier::CosInZ2;
};

/// Replace the periodic drive by a two-variable rotator appended to the state,
/// z1' = omega*z2, z2' = -omega*z1, with the drive term replaced by the carrier
/// variable (amplitude F carried by z itself). With stabilize=true the field
/// gains the cubic attractor terms (F^2 - z1^2 - z2^2)*z_i; otherwise the
/// constraint set gains the equality F^2 - z1^2 - z2^2 = 0.
DynSystem autonomize_periodic(const ForcedSystem& sys, bool stabilize);

/// Identifies the angular variable and its sin/cos placeholder variables in a
/// system prepared for the trigonometric lift. field[theta] is the angular
/// rate Omega; field[sin_var] and field[cos_var] must be zero on input.
struct TrigLiftSpec {
    int theta = 0;
    int sin_var = 0;
    int cos_var = 0;
};

/// Remove the angular variable theta, giving its sin/cos placeholders the
/// dynamics s' = Omega*c + lam*(1 - s^2 - c^2)*s, c' = -Omega*s + lam*(1 - s^2
/// - c^2)*c with lam = 1 when stabilized, else lam = 0 plus the equality
/// constraint 1 - s^2 - c^2 = 0. Rejects systems where theta appears in any
/// polynomial (its influence must flow through the placeholders).
DynSystem lift_trig_state(const DynSystem& sys, const TrigLiftSpec& spec, bool stabilize);

/// Truncated sine series in one variable. With about_pi=false this is the
/// Maclaurin polynomial of the given odd order; with about_pi=true the series
/// is taken around theta = pi (still expressed in the original variable), for
/// use near the inverted equilibrium.
Polynomial taylor_sin(int order, bool about_pi = false);

}  // namespace sosbound
