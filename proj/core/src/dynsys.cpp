#include "sosbound/dynsys.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sosbound/errors.hpp"

namespace sosbound {

namespace {

bool multiset_equal(std::vector<Polynomial> a, std::vector<Polynomial> b) {
    if (a.size() != b.size()) return false;
    for (const auto& p : a) {
        auto it = std::find(b.begin(), b.end(), p);
        if (it == b.end()) return false;
        b.erase(it);
    }
    return true;
}

}  // namespace

bool SemialgebraicSet::same_set(const SemialgebraicSet& other) const {
    return multiset_equal(inequalities, other.inequalities) &&
           multiset_equal(equalities, other.equalities);
}

int DynSystem::var_index(std::string_view name) const {
    for (int i = 0; i < dimension(); ++i) {
        if (var_names[i] == name) return i;
    }
    throw std::out_of_range("unknown variable name: " + std::string(name));
}

void DynSystem::validate() const {
    const int d = dimension();
    if (static_cast<int>(field.size()) != d)
        throw DimensionMismatchError("DynSystem: one field component per variable required");
    auto check = [&](const Polynomial& p, const char* what) {
        if (p.nvars() != d)
            throw DimensionMismatchError(std::string("DynSystem: ") + what +
                                         " has nvars != dimension");
    };
    for (const auto& f : field) check(f, "field component");
    for (const auto& g : constraint_set.inequalities) check(g, "inequality");
    for (const auto& h : constraint_set.equalities) check(h, "equality");
}

DynSystem autonomize_periodic(const ForcedSystem& sys, bool stabilize) {
    if (!(sys.frequency > 0.0)) throw std::invalid_argument("autonomize_periodic: omega must be > 0");
    if (!std::isfinite(sys.amplitude)) throw std::invalid_argument("autonomize_periodic: bad F");
    for (const auto& [comp, coeff] : sys.forcing) {
        if (comp < 0 || comp >= sys.base.dimension())
            throw std::out_of_range("autonomize_periodic: forcing component out of range");
        if (!std::isfinite(coeff))
            throw std::invalid_argument("autonomize_periodic: non-finite forcing coefficient");
    }
    sys.base.validate();

    const int d = sys.base.dimension();
    const int n = d + 2;
    const int z1 = d, z2 = d + 1;
    const double f_amp = sys.amplitude;
    const double omega = sys.frequency;

    DynSystem out;
    out.var_names = sys.base.var_names;
    out.var_names.push_back("z1");
    out.var_names.push_back("z2");
    out.metadata = sys.base.metadata;
    out.metadata["F"] = f_amp;
    out.metadata["omega"] = omega;

    std::vector<int> embed(d);
    for (int i = 0; i < d; ++i) embed[i] = i;

    out.field.reserve(n);
    for (const auto& f : sys.base.field) out.field.push_back(f.remap_vars(n, embed));
    const int carrier = sys.carrier == ForcingCarrier::CosInZ2 ? z2 : z1;
    for (const auto& [comp, coeff] : sys.forcing) {
        out.field[comp] = out.field[comp] + Polynomial::variable(n, carrier) * coeff;
    }

    const Polynomial z1p = Polynomial::variable(n, z1);
    const Polynomial z2p = Polynomial::variable(n, z2);
    Polynomial zdot1 = z2p * omega;
    Polynomial zdot2 = -(z1p * omega);
    const Polynomial circle =
        Polynomial::constant(n, f_amp * f_amp) - z1p * z1p - z2p * z2p;
    if (stabilize) {
        zdot1 = zdot1 + circle * z1p;
        zdot2 = zdot2 + circle * z2p;
    }
    out.field.push_back(zdot1);
    out.field.push_back(zdot2);

    for (const auto& g : sys.base.constraint_set.inequalities)
        out.constraint_set.inequalities.push_back(g.remap_vars(n, embed));
    for (const auto& h : sys.base.constraint_set.equalities)
        out.constraint_set.equalities.push_back(h.remap_vars(n, embed));
    if (!stabilize) out.constraint_set.equalities.push_back(circle);

    out.validate();
    return out;
}

DynSystem lift_trig_state(const DynSystem& sys, const TrigLiftSpec& spec, bool stabilize) {
    sys.validate();
    const int d = sys.dimension();
    auto in_range = [d](int i) { return i >= 0 && i < d; };
    if (!in_range(spec.theta) || !in_range(spec.sin_var) || !in_range(spec.cos_var) ||
        spec.theta == spec.sin_var || spec.theta == spec.cos_var ||
        spec.sin_var == spec.cos_var)
        throw std::invalid_argument("lift_trig_state: bad variable indices");
    if (!sys.field[spec.sin_var].is_zero() || !sys.field[spec.cos_var].is_zero())
        throw std::invalid_argument("lift_trig_state: placeholder dynamics must start empty");

    auto reject_theta = [&](const Polynomial& p, const char* what) {
        if (p.degree_in(spec.theta) > 0)
            throw std::invalid_argument(std::string("lift_trig_state: theta appears in ") + what +
                                        " outside sin/cos placeholders");
    };
    for (int i = 0; i < d; ++i) reject_theta(sys.field[i], "the field");
    for (const auto& g : sys.constraint_set.inequalities) reject_theta(g, "a constraint");
    for (const auto& h : sys.constraint_set.equalities) reject_theta(h, "a constraint");

    // Drop theta; remaining variables keep their relative order.
    const int n = d - 1;
    std::vector<int> embed(d, -1);
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 0, j = 0; i < d; ++i) {
        if (i == spec.theta) continue;
        embed[i] = j++;
        names.push_back(sys.var_names[i]);
    }
    // remap_vars needs an image for theta too; it never occurs, so any valid
    // index works.
    embed[spec.theta] = 0;

    const int s = embed[spec.sin_var];
    const int c = embed[spec.cos_var];
    const Polynomial omega_poly = sys.field[spec.theta].remap_vars(n, embed);
    const Polynomial sp = Polynomial::variable(n, s);
    const Polynomial cp = Polynomial::variable(n, c);
    const Polynomial unit_circle = Polynomial::constant(n, 1.0) - sp * sp - cp * cp;

    DynSystem out;
    out.var_names = std::move(names);
    out.metadata = sys.metadata;
    out.field.resize(n, Polynomial(n));
    for (int i = 0; i < d; ++i) {
        if (i == spec.theta) continue;
        out.field[embed[i]] = sys.field[i].remap_vars(n, embed);
    }
    out.field[s] = omega_poly * cp;
    out.field[c] = -(omega_poly * sp);
    if (stabilize) {
        out.field[s] = out.field[s] + unit_circle * sp;
        out.field[c] = out.field[c] + unit_circle * cp;
    }

    for (const auto& g : sys.constraint_set.inequalities)
        out.constraint_set.inequalities.push_back(g.remap_vars(n, embed));
    for (const auto& h : sys.constraint_set.equalities)
        out.constraint_set.equalities.push_back(h.remap_vars(n, embed));
    if (!stabilize) out.constraint_set.equalities.push_back(unit_circle);

    out.validate();
    return out;
}

Polynomial taylor_sin(int order, bool about_pi) {
    if (order < 1 || order % 2 == 0 || order > 9)
        throw std::invalid_argument("taylor_sin: order must be odd and in {1,3,5,7,9}");
    const Polynomial theta = Polynomial::variable(1, 0);
    // sin(pi - u) = sin(u): around pi, expand in u = pi - theta.
    const Polynomial arg =
        about_pi ? Polynomial::constant(1, M_PI) - theta : theta;
    Polynomial out(1);
    double factorial = 1.0;
    double sign = 1.0;
    for (int k = 1; k <= order; k += 2) {
        factorial *= (k == 1) ? 1.0 : static_cast<double>(k) * (k - 1);
        out = out + arg.pow(k) * (sign / factorial);
        sign = -sign;
    }
    return out;
}

}  // namespace sosbound
