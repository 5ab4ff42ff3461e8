#include "sosbound/bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sosbound/errors.hpp"

namespace sosbound {

namespace {

int even_ceil(int d) { return d % 2 == 0 ? d : d + 1; }
int even_floor(int d) { return d % 2 == 0 ? d : d - 1; }

std::vector<double> resolve_scales(const BoundQuery& q) {
    const int n = q.system.dimension();
    if (!q.var_scales.empty()) {
        if (static_cast<int>(q.var_scales.size()) != n)
            throw std::invalid_argument("BoundQuery: var_scales length != dimension");
        return q.var_scales;
    }
    std::vector<double> scales(n, 1.0);
    for (int i = 0; i < n; ++i) {
        auto it = q.system.metadata.find("scale:" + q.system.var_names[i]);
        if (it != q.system.metadata.end() && it->second > 0.0) scales[i] = it->second;
    }
    return scales;
}

Polynomial normalized(const Polynomial& p) {
    const double m = p.max_abs_coeff();
    return m > 0.0 ? p * (1.0 / m) : p;
}

}  // namespace

BuiltBoundProgram build_bound_program(const BoundQuery& q) {
    q.system.validate();
    const int n = q.system.dimension();
    if (q.observable.nvars() != n)
        throw DimensionMismatchError("BoundQuery: observable nvars != system dimension");
    if (q.v_degree < 1) throw std::invalid_argument("BoundQuery: v_degree must be >= 1");

    BuiltBoundProgram built;
    built.scales = resolve_scales(q);

    // Pose the program in scaled coordinates x = S * x~; averages are
    // invariant, conditioning is not.
    DynSystem scaled = q.system;
    std::vector<double> inv(built.scales.size());
    for (size_t i = 0; i < built.scales.size(); ++i) inv[i] = 1.0 / built.scales[i];
    for (int k = 0; k < n; ++k)
        scaled.field[k] = q.system.field[k].rescale_vars(built.scales) * inv[k];
    for (auto& g : scaled.constraint_set.inequalities)
        g = normalized(g.rescale_vars(built.scales));
    for (auto& h : scaled.constraint_set.equalities)
        h = normalized(h.rescale_vars(built.scales));
    Polynomial phi = q.observable.rescale_vars(built.scales);
    if (q.direction == BoundDirection::Lower) phi = -phi;

    built.scaled_system = scaled;
    built.scaled_observable = phi;
    built.symmetry = detect_sign_symmetry(scaled.field, phi, scaled.constraint_set);

    int field_deg = 0;
    for (const auto& f : scaled.field) field_deg = std::max(field_deg, f.degree());
    const int lie_deg = field_deg + q.v_degree - 1;
    built.certified_degree = even_ceil(std::max(phi.degree(), std::max(lie_deg, 0)));
    const int d_cert = built.certified_degree;

    SosProgram& prog = built.program;
    prog.nvars = n;

    // Decision variables: U first, then the V coefficients (no constant term:
    // V only enters through its gradient).
    int next_id = 0;
    built.u_var = next_id;
    prog.decision_vars.push_back({next_id++, "U", DecisionRole::Bound});
    LinearPolyExpr certified(-phi);
    certified.add_term(built.u_var, Polynomial::constant(n, 1.0));
    for (const Monomial& beta : monomial_basis(n, q.v_degree)) {
        if (beta.is_unit()) continue;
        if (!built.symmetry.trivial() && !built.symmetry.invariant(beta)) continue;
        const Polynomial lie =
            lie_derivative(Polynomial::term(n, beta, 1.0), scaled.field);
        prog.decision_vars.push_back(
            {next_id, "V[" + beta.to_string() + "]", DecisionRole::AuxCoeff});
        built.v_coeffs.emplace_back(next_id, beta);
        certified.add_term(next_id, -lie);
        ++next_id;
    }

    // Localize on the constraint set, one constraint at a time so each gets
    // its own multiplier degree.
    int next_block = 0;
    built.num_inequalities = static_cast<int>(scaled.constraint_set.inequalities.size());
    built.num_equalities = static_cast<int>(scaled.constraint_set.equalities.size());
    auto multiplier_degree = [&](const Polynomial& c) {
        if (q.multiplier_degree >= 0) return q.multiplier_degree;
        return std::max(0, even_floor(d_cert - c.degree()));
    };
    for (int gi = 0; gi < built.num_inequalities; ++gi) {
        SemialgebraicSet one;
        one.inequalities = {scaled.constraint_set.inequalities[gi]};
        SProcedureResult res = s_procedure(certified, one,
                                           multiplier_degree(one.inequalities[0]), d_cert,
                                           next_id, next_block, built.symmetry);
        certified = std::move(res.certified);
        for (auto& blk : res.sos_multiplier_blocks) {
            built.sos_multiplier_blocks.emplace_back(
                static_cast<int>(prog.gram_blocks.size()), gi);
            prog.gram_blocks.push_back(std::move(blk));
        }
    }
    for (int hj = 0; hj < built.num_equalities; ++hj) {
        SemialgebraicSet one;
        one.equalities = {scaled.constraint_set.equalities[hj]};
        SProcedureResult res = s_procedure(certified, one,
                                           multiplier_degree(one.equalities[0]), d_cert,
                                           next_id, next_block, built.symmetry);
        certified = std::move(res.certified);
        for (auto& dv : res.free_multiplier_vars) prog.decision_vars.push_back(dv);
        for (auto& fc : res.free_coeffs) {
            fc.equality_index = hj;
            built.free_coeffs.push_back(fc);
        }
    }

    // Main Gram blocks: full monomial basis of half the certificate degree,
    // split into sign-character classes.
    std::vector<Monomial> main_basis = monomial_basis(n, d_cert / 2);
    std::vector<std::vector<Monomial>> classes =
        built.symmetry.trivial() ? std::vector<std::vector<Monomial>>{main_basis}
                                 : built.symmetry.split_by_character(main_basis);
    for (auto& cls : classes) {
        if (cls.empty()) continue;
        GramBlock blk;
        blk.block_id = next_block++;
        blk.basis = std::move(cls);
        blk.weight = Polynomial::constant(n, 1.0);
        blk.label = "certified";
        prog.gram_blocks.push_back(std::move(blk));
    }

    prog.matching_constraints = build_matching(certified, prog.gram_blocks);
    prog.objective_var = built.u_var;
    prog.maximize = false;
    trim_zero_diagonals(prog);
    return built;
}

SosProgram build_program(const BoundQuery& q) { return build_bound_program(q).program; }

namespace {

BoundResult solve_built(const BoundQuery& q, const BuiltBoundProgram& built) {
    SosSolveResult sos = solve_sos(built.program, q.sdp);

    BoundResult r;
    r.direction = q.direction;
    r.v_degree = q.v_degree;
    r.status = sos.sdp.status;
    r.sdp_gap = sos.sdp.gap;
    r.sdp_iterations = sos.sdp.iterations;
    r.certificate_residual = sos.matching_residual;
    r.degree_too_low = sos.sdp.status == SdpStatus::DualInfeasible;

    const double u = sos.objective;
    r.bound = q.direction == BoundDirection::Upper ? u : -u;

    const int n = q.system.dimension();
    std::vector<double> inv(built.scales.size());
    for (size_t i = 0; i < built.scales.size(); ++i) inv[i] = 1.0 / built.scales[i];

    // V in original coordinates (negated for lower bounds so that
    // Phi + f.grad(V) >= bound reads uniformly).
    Polynomial v_scaled(n);
    for (const auto& [id, beta] : built.v_coeffs) {
        const double coeff = sos.decisions[id];
        if (coeff != 0.0) v_scaled = v_scaled + Polynomial::term(n, beta, coeff);
    }
    if (q.direction == BoundDirection::Lower) v_scaled = -v_scaled;
    r.v = v_scaled.rescale_vars(inv);

    // Multipliers per constraint, unscaled.
    r.multipliers.assign(built.num_inequalities + built.num_equalities, Polynomial(n));
    for (const auto& [block_pos, gi] : built.sos_multiplier_blocks) {
        const GramBlock& blk = built.program.gram_blocks[block_pos];
        r.multipliers[gi] =
            r.multipliers[gi] + reconstruct(sos.gram[block_pos], blk.basis, n);
    }
    for (const auto& fc : built.free_coeffs) {
        const double w = sos.decisions[fc.decision_id];
        if (w != 0.0) {
            auto& target = r.multipliers[built.num_inequalities + fc.equality_index];
            target = target + Polynomial::term(n, fc.monomial, w);
        }
    }
    for (auto& mult : r.multipliers) mult = mult.rescale_vars(inv);
    return r;
}

}  // namespace

BoundResult bound(const BoundQuery& q) {
    const BuiltBoundProgram built = build_bound_program(q);
    BoundResult r = solve_built(q, built);
    r.escalation_trace = {{q.v_degree, r.bound}};
    return r;
}

BoundResult escalate(const BoundQuery& q) {
    if (q.v_degree > q.max_degree)
        throw std::invalid_argument("escalate: v_degree exceeds max_degree");
    std::vector<std::pair<int, double>> trace;
    BoundResult last;
    bool have_last = false;
    for (int d = q.v_degree; d <= q.max_degree; d += 2) {
        BoundQuery qd = q;
        qd.v_degree = d;
        BoundResult r = bound(qd);
        if (!r.ok()) {
            if (have_last && !r.degree_too_low) {
                // Keep the last good result but record the failure.
                last.escalation_trace = trace;
                return last;
            }
            r.escalation_trace = trace;
            r.escalation_trace.emplace_back(d, r.bound);
            return r;
        }
        trace.emplace_back(d, r.bound);
        const bool converged =
            have_last &&
            std::abs(r.bound - last.bound) <= q.sharpness_tol * std::max(1.0, std::abs(r.bound));
        last = std::move(r);
        have_last = true;
        if (converged) break;
    }
    last.escalation_trace = trace;
    return last;
}

std::vector<double> extremal_diagnostic(const BoundQuery& q, const BoundResult& r,
                                        const std::vector<std::vector<double>>& points) {
    const Polynomial drift = q.observable + lie_derivative(r.v, q.system.field);
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(drift.evaluate(p));
    return out;
}

}  // namespace sosbound
