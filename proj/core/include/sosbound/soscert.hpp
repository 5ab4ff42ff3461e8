#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sosbound/dynsys.hpp"
#include "sosbound/polynomial.hpp"

namespace sosbound {

/// A polynomial whose coefficients are affine in scalar decision variables:
/// constant + sum_d delta_d * coeff_poly_d.
struct LinearPolyExpr {
    Polynomial constant;
    std::vector<std::pair<int, Polynomial>> coeffs;  // (decision id, coefficient)

    explicit LinearPolyExpr(int nvars = 0) : constant(nvars) {}
    explicit LinearPolyExpr(Polynomial c) : constant(std::move(c)) {}

    int nvars() const noexcept { return constant.nvars(); }
    void add_term(int decision_id, Polynomial coeff);
    /// Instantiate at a decision assignment (ids beyond the vector are zero).
    Polynomial at(std::span<const double> decisions) const;
};

enum class DecisionRole { Bound, AuxCoeff, MultiplierCoeff, Other };

struct DecisionVar {
    int id = 0;
    std::string name;
    DecisionRole role = DecisionRole::Other;
};

/// One PSD Gram factor of the certificate. `weight` multiplies the quadratic
/// form in the certified identity: the main SOS block has weight 1, an
/// S-procedure multiplier for g has weight g.
struct GramBlock {
    int block_id = 0;
    std::vector<Monomial> basis;  // graded-lex ordered, duplicate free
    Polynomial weight;
    std::string label;

    int size() const noexcept { return static_cast<int>(basis.size()); }
};

/// Linear equation tying Gram entries to the certified coefficients of one
/// monomial: sum of weighted entries == rhs_constant + sum rhs_coeffs.delta.
struct MatchingConstraint {
    struct Entry {
        int block = 0;
        int row = 0;
        int col = 0;  // row <= col; weight already includes the factor 2
        double weight = 1.0;
    };
    Monomial monomial;
    std::vector<Entry> entries;
    double rhs_constant = 0.0;
    std::vector<std::pair<int, double>> rhs_coeffs;
};

/// A sum-of-squares membership program: find decision variables and PSD Gram
/// blocks satisfying the matching constraints, optimizing one decision var.
struct SosProgram {
    int nvars = 0;
    std::vector<DecisionVar> decision_vars;
    std::vector<GramBlock> gram_blocks;
    std::vector<MatchingConstraint> matching_constraints;
    int objective_var = -1;  // -1 = feasibility
    bool maximize = false;

    int num_decisions() const noexcept { return static_cast<int>(decision_vars.size()); }
    /// Human-readable matching system, one line per monomial constraint.
    std::string dump_matching(std::span<const std::string> names = {}) const;
};

/// Emit the Gram parameterization of p_expr over the given basis: one linear
/// constraint per distinct product monomial z_a*z_b. Throws
/// UnrepresentableMonomialError if p_expr has support outside the product
/// span.
std::pair<GramBlock, std::vector<MatchingConstraint>> gram_parameterize(
    const LinearPolyExpr& p_expr, std::vector<Monomial> basis, int block_id = 0);

/// Complete matching system of a certified expression against a family of
/// weighted Gram blocks (the same support check as gram_parameterize, taken
/// over all blocks together).
std::vector<MatchingConstraint> build_matching(const LinearPolyExpr& certified,
                                               std::span<const GramBlock> blocks);

/// Subgroup of coordinate sign flips under which a bound problem is
/// invariant; used to split Gram bases into character classes.
struct SignSymmetry {
    int nvars = 0;
    std::vector<uint32_t> flip_masks;  // valid sign patterns (bit i = flip x_i)

    bool trivial() const noexcept { return flip_masks.empty(); }
    bool invariant(const Monomial& m) const noexcept;
    bool invariant(const Polynomial& p) const noexcept;
    /// Character signature of a monomial across the group (bit per mask).
    std::uint64_t character_key(const Monomial& m) const noexcept;
    /// Partition a basis into character classes (deterministic order).
    std::vector<std::vector<Monomial>> split_by_character(std::span<const Monomial> basis) const;
};

/// All sign patterns sigma with f equivariant (f_k(sigma x) = sigma_k f_k(x))
/// and phi plus every constraint polynomial invariant.
SignSymmetry detect_sign_symmetry(std::span<const Polynomial> field, const Polynomial& phi,
                                  const SemialgebraicSet& set);

/// Result of localizing a certified expression on a semialgebraic set:
/// the expression minus free-multiplier terms (folded into its affine part)
/// and the new SOS multiplier blocks still to be parameterized.
struct SProcedureResult {
    LinearPolyExpr certified;
    std::vector<GramBlock> sos_multiplier_blocks;
    std::vector<DecisionVar> free_multiplier_vars;
    /// (decision id, basis monomial, constraint index) for each free coeff.
    struct FreeCoeff {
        int decision_id;
        Monomial monomial;
        int equality_index;
    };
    std::vector<FreeCoeff> free_coeffs;
};

/// Localize `certified` on `set`: each inequality g_i gets an SOS multiplier
/// s_i (its own Gram block, weight g_i) of degree <= mult_degree, each
/// equality h_j a free polynomial multiplier of degree <= mult_degree; the
/// terms s_i g_i and r_j h_j are subtracted from the certified expression.
/// `certified_degree` bounds the representable support; degree bookkeeping
/// failures throw. Bases honor the symmetry group when provided.
SProcedureResult s_procedure(const LinearPolyExpr& certified, const SemialgebraicSet& set,
                             int mult_degree, int certified_degree, int& next_decision_id,
                             int& next_block_id, const SignSymmetry& sym = {});

/// Expand z^T Q z over the basis into a canonical polynomial.
Polynomial reconstruct(const Eigen::MatrixXd& q, std::span<const Monomial> basis, int nvars);

/// Remove Gram basis monomials whose diagonal entries are forced to zero by
/// the matching system (a constraint with zero right-hand side whose entries
/// are all diagonal with one strict sign pins every one of them at zero, and
/// positive semidefiniteness then kills the whole row). Iterates to a fixed
/// point, reindexing bases and dropping trivial constraints. Returns the
/// number of basis monomials removed.
int trim_zero_diagonals(SosProgram& prog);

}  // namespace sosbound
