#include "sosbound/soscert.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sosbound/errors.hpp"

namespace sosbound {

void LinearPolyExpr::add_term(int decision_id, Polynomial coeff) {
    if (coeff.nvars() != nvars())
        throw DimensionMismatchError("LinearPolyExpr: coefficient nvars mismatch");
    for (auto& [id, p] : coeffs) {
        if (id == decision_id) {
            p = p + coeff;
            return;
        }
    }
    coeffs.emplace_back(decision_id, std::move(coeff));
}

Polynomial LinearPolyExpr::at(std::span<const double> decisions) const {
    Polynomial out = constant;
    for (const auto& [id, p] : coeffs) {
        const double v = id < static_cast<int>(decisions.size()) ? decisions[id] : 0.0;
        if (v != 0.0) out = out + p * v;
    }
    return out;
}

namespace {

/// Accumulates matching constraints keyed by monomial.
struct MatchingBuilder {
    std::map<Monomial, MatchingConstraint, GradedLexLess> rows;

    MatchingConstraint& row(const Monomial& alpha) {
        auto it = rows.find(alpha);
        if (it == rows.end()) {
            it = rows.emplace(alpha, MatchingConstraint{}).first;
            it->second.monomial = alpha;
        }
        return it->second;
    }

    void add_entry(const Monomial& alpha, int block, int r, int c, double w) {
        row(alpha).entries.push_back({block, r, c, w});
    }

    void add_rhs(const LinearPolyExpr& expr) {
        for (const auto& [mono, coeff] : expr.constant.terms()) row(mono).rhs_constant += coeff;
        for (const auto& [id, poly] : expr.coeffs) {
            for (const auto& [mono, coeff] : poly.terms()) {
                auto& r = row(mono);
                bool merged = false;
                for (auto& [rid, rc] : r.rhs_coeffs) {
                    if (rid == id) {
                        rc += coeff;
                        merged = true;
                        break;
                    }
                }
                if (!merged) r.rhs_coeffs.emplace_back(id, coeff);
            }
        }
    }

    std::vector<MatchingConstraint> take() {
        std::vector<MatchingConstraint> out;
        out.reserve(rows.size());
        for (auto& [mono, c] : rows) out.push_back(std::move(c));
        return out;
    }
};

/// Emit the Gram-product entries of one block into the builder.
void emit_block_entries(const GramBlock& block, MatchingBuilder& builder) {
    const int n = block.size();
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            const Monomial prod = block.basis[a].times(block.basis[b]);
            const double pair_weight = (a == b) ? 1.0 : 2.0;
            if (block.weight.terms().size() == 1 &&
                block.weight.terms().begin()->first.is_unit()) {
                builder.add_entry(prod, block.block_id, a, b,
                                  pair_weight * block.weight.terms().begin()->second);
            } else {
                for (const auto& [gm, gc] : block.weight.terms())
                    builder.add_entry(prod.times(gm), block.block_id, a, b, pair_weight * gc);
            }
        }
    }
}

}  // namespace

std::vector<MatchingConstraint> build_matching(const LinearPolyExpr& certified,
                                               std::span<const GramBlock> blocks) {
    MatchingBuilder builder;
    for (const auto& block : blocks) emit_block_entries(block, builder);

    // Representability check: the expression's support must be covered.
    auto check_support = [&](const Polynomial& p) {
        for (const auto& [mono, coeff] : p.terms()) {
            auto it = builder.rows.find(mono);
            if (it == builder.rows.end() || it->second.entries.empty())
                throw UnrepresentableMonomialError(mono.to_string());
        }
    };
    check_support(certified.constant);
    for (const auto& [id, poly] : certified.coeffs) check_support(poly);

    builder.add_rhs(certified);
    return builder.take();
}

std::pair<GramBlock, std::vector<MatchingConstraint>> gram_parameterize(
    const LinearPolyExpr& p_expr, std::vector<Monomial> basis, int block_id) {
    // Canonical order, duplicates dropped.
    std::sort(basis.begin(), basis.end(), GradedLexLess{});
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());

    GramBlock block;
    block.block_id = block_id;
    block.basis = std::move(basis);
    block.weight = Polynomial::constant(p_expr.nvars(), 1.0);
    block.label = "sos";

    std::vector<MatchingConstraint> constraints =
        build_matching(p_expr, std::span<const GramBlock>(&block, 1));
    return {std::move(block), std::move(constraints)};
}

bool SignSymmetry::invariant(const Monomial& m) const noexcept {
    return character_key(m) == 0;
}

bool SignSymmetry::invariant(const Polynomial& p) const noexcept {
    for (const auto& [m, c] : p.terms())
        if (!invariant(m)) return false;
    return true;
}

std::uint64_t SignSymmetry::character_key(const Monomial& m) const noexcept {
    std::uint64_t key = 0;
    for (size_t g = 0; g < flip_masks.size(); ++g) {
        int parity = 0;
        for (const auto& [v, e] : m.factors()) {
            if (flip_masks[g] & (1u << v)) parity ^= (e & 1);
        }
        if (parity) key |= (std::uint64_t{1} << g);
    }
    return key;
}

std::vector<std::vector<Monomial>> SignSymmetry::split_by_character(
    std::span<const Monomial> basis) const {
    std::map<std::uint64_t, std::vector<Monomial>> classes;
    for (const auto& m : basis) classes[character_key(m)].push_back(m);
    std::vector<std::vector<Monomial>> out;
    out.reserve(classes.size());
    for (auto& [key, monos] : classes) out.push_back(std::move(monos));
    return out;
}

SignSymmetry detect_sign_symmetry(std::span<const Polynomial> field, const Polynomial& phi,
                                  const SemialgebraicSet& set) {
    const int n = phi.nvars();
    SignSymmetry sym;
    sym.nvars = n;
    if (n <= 0 || n > 20) return sym;

    auto mono_flips_sign = [](const Monomial& m, uint32_t mask) {
        int parity = 0;
        for (const auto& [v, e] : m.factors())
            if (mask & (1u << v)) parity ^= (e & 1);
        return parity != 0;
    };
    auto poly_invariant = [&](const Polynomial& p, uint32_t mask) {
        for (const auto& [m, c] : p.terms())
            if (mono_flips_sign(m, mask)) return false;
        return true;
    };

    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool ok = poly_invariant(phi, mask);
        for (int k = 0; ok && k < static_cast<int>(field.size()); ++k) {
            // Equivariance: every term of f_k must flip exactly like x_k.
            const bool want_flip = (mask & (1u << k)) != 0;
            for (const auto& [m, c] : field[k].terms()) {
                if (mono_flips_sign(m, mask) != want_flip) {
                    ok = false;
                    break;
                }
            }
        }
        for (const auto& g : set.inequalities)
            if (ok) ok = poly_invariant(g, mask);
        for (const auto& h : set.equalities)
            if (ok) ok = poly_invariant(h, mask);
        if (ok) sym.flip_masks.push_back(mask);
    }
    // 64-bit character keys cap the useful group size; beyond that the gain
    // is negligible anyway.
    if (sym.flip_masks.size() > 63) sym.flip_masks.resize(63);
    return sym;
}

SProcedureResult s_procedure(const LinearPolyExpr& certified, const SemialgebraicSet& set,
                             int mult_degree, int certified_degree, int& next_decision_id,
                             int& next_block_id, const SignSymmetry& sym) {
    if (mult_degree < 0) throw std::invalid_argument("s_procedure: negative multiplier degree");
    const int n = certified.nvars();
    SProcedureResult out;
    out.certified = certified;

    for (size_t gi = 0; gi < set.inequalities.size(); ++gi) {
        const Polynomial& g = set.inequalities[gi];
        if (mult_degree % 2 != 0)
            throw std::invalid_argument("s_procedure: inequality multiplier degree must be even");
        if (mult_degree + g.degree() > certified_degree)
            throw std::invalid_argument(
                "s_procedure: multiplier*constraint degree exceeds the representable "
                "certificate degree");
        std::vector<Monomial> basis = monomial_basis(n, mult_degree / 2);
        std::vector<std::vector<Monomial>> classes =
            sym.trivial() ? std::vector<std::vector<Monomial>>{basis}
                          : sym.split_by_character(basis);
        for (auto& cls : classes) {
            if (cls.empty()) continue;
            GramBlock blk;
            blk.block_id = next_block_id++;
            blk.basis = std::move(cls);
            blk.weight = g;
            blk.label = "multiplier g" + std::to_string(gi);
            out.sos_multiplier_blocks.push_back(std::move(blk));
        }
    }

    for (size_t hj = 0; hj < set.equalities.size(); ++hj) {
        const Polynomial& h = set.equalities[hj];
        if (mult_degree + h.degree() > certified_degree)
            throw std::invalid_argument(
                "s_procedure: multiplier*constraint degree exceeds the representable "
                "certificate degree");
        for (const Monomial& mono : monomial_basis(n, mult_degree)) {
            if (!sym.trivial() && !sym.invariant(mono)) continue;
            DecisionVar var;
            var.id = next_decision_id++;
            var.name = "r" + std::to_string(hj) + "[" + mono.to_string() + "]";
            var.role = DecisionRole::MultiplierCoeff;
            out.free_multiplier_vars.push_back(var);
            out.free_coeffs.push_back({var.id, mono, static_cast<int>(hj)});
            // Subtract r_j h_j: the decision-variable coefficient is -h*mono.
            out.certified.add_term(var.id, -(h * Polynomial::term(n, mono, 1.0)));
        }
    }
    return out;
}

Polynomial reconstruct(const Eigen::MatrixXd& q, std::span<const Monomial> basis, int nvars) {
    const int n = static_cast<int>(basis.size());
    if (q.rows() != n || q.cols() != n)
        throw DimensionMismatchError("reconstruct: Q size != basis size");
    Polynomial::TermMap terms;
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            const double w = (a == b) ? q(a, a) : q(a, b) + q(b, a);
            if (w != 0.0) terms[basis[a].times(basis[b])] += w;
        }
    }
    return Polynomial(nvars, std::move(terms));
}

int trim_zero_diagonals(SosProgram& prog) {
    int removed_total = 0;
    while (true) {
        // (block_id, row) pairs whose diagonals are pinned at zero.
        std::vector<std::pair<int, int>> doomed;
        for (const auto& c : prog.matching_constraints) {
            if (c.rhs_constant != 0.0 || !c.rhs_coeffs.empty() || c.entries.empty()) continue;
            bool all_diag = true;
            int sign = 0;
            for (const auto& e : c.entries) {
                if (e.row != e.col || e.weight == 0.0) {
                    all_diag = false;
                    break;
                }
                const int s = e.weight > 0.0 ? 1 : -1;
                if (sign == 0) sign = s;
                if (s != sign) {
                    all_diag = false;
                    break;
                }
            }
            if (!all_diag) continue;
            for (const auto& e : c.entries) doomed.emplace_back(e.block, e.row);
        }
        if (doomed.empty()) break;
        removed_total += static_cast<int>(doomed.size());

        // New row indices per block (-1 = removed).
        std::map<int, std::vector<int>> remap;
        for (auto& blk : prog.gram_blocks) {
            remap[blk.block_id].assign(blk.basis.size(), 0);
        }
        for (const auto& [blk_id, row] : doomed) remap[blk_id][row] = -1;
        for (auto& blk : prog.gram_blocks) {
            auto& m = remap[blk.block_id];
            std::vector<Monomial> kept;
            int next = 0;
            for (size_t i = 0; i < blk.basis.size(); ++i) {
                if (m[i] < 0) continue;
                m[i] = next++;
                kept.push_back(blk.basis[i]);
            }
            blk.basis = std::move(kept);
        }

        std::vector<MatchingConstraint> rebuilt;
        rebuilt.reserve(prog.matching_constraints.size());
        for (auto& c : prog.matching_constraints) {
            MatchingConstraint nc;
            nc.monomial = c.monomial;
            nc.rhs_constant = c.rhs_constant;
            nc.rhs_coeffs = c.rhs_coeffs;
            for (const auto& e : c.entries) {
                const auto& m = remap.at(e.block);
                const int r = m[e.row], col = m[e.col];
                if (r < 0 || col < 0) continue;
                nc.entries.push_back({e.block, std::min(r, col), std::max(r, col), e.weight});
            }
            if (nc.entries.empty() && nc.rhs_constant == 0.0 && nc.rhs_coeffs.empty()) continue;
            rebuilt.push_back(std::move(nc));
        }
        prog.matching_constraints = std::move(rebuilt);
    }
    // Drop blocks that lost their entire basis.
    prog.gram_blocks.erase(
        std::remove_if(prog.gram_blocks.begin(), prog.gram_blocks.end(),
                       [](const GramBlock& b) { return b.basis.empty(); }),
        prog.gram_blocks.end());
    return removed_total;
}

std::string SosProgram::dump_matching(std::span<const std::string> names) const {
    std::ostringstream os;
    for (const auto& c : matching_constraints) {
        os << c.monomial.to_string(names) << ": ";
        bool first = true;
        for (const auto& e : c.entries) {
            if (!first) os << " + ";
            first = false;
            if (e.weight != 1.0) os << e.weight << "*";
            os << "Q" << e.block << "[" << e.row + 1 << "," << e.col + 1 << "]";
        }
        if (c.entries.empty()) os << "0";
        os << " = " << c.rhs_constant;
        for (const auto& [id, w] : c.rhs_coeffs) {
            const std::string nm =
                id < static_cast<int>(decision_vars.size()) ? decision_vars[id].name
                                                            : "d" + std::to_string(id);
            os << (w >= 0 ? " + " : " - ") << std::abs(w) << "*" << nm;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace sosbound
