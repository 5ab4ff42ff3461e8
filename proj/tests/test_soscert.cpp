#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sosbound/errors.hpp"
#include "sosbound/sos_to_sdp.hpp"
#include "sosbound/soscert.hpp"

using namespace sosbound;
using Catch::Approx;

namespace {

const Monomial kX2 = Monomial::variable(0, 2);
const Monomial kY2 = Monomial::variable(1, 2);
const Monomial kXY = Monomial({{0, 1}, {1, 1}});

/// The worked example 2x^4 + 5y^4 + x^2y^2 over basis [x^2, y^2, xy].
std::pair<GramBlock, std::vector<MatchingConstraint>> paper_example() {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const LinearPolyExpr expr(x.pow(4) * 2.0 + y.pow(4) * 5.0 + x.pow(2) * y.pow(2));
    return gram_parameterize(expr, {kX2, kY2, kXY});
}

const MatchingConstraint& find_row(const std::vector<MatchingConstraint>& rows,
                                   const Monomial& m) {
    for (const auto& r : rows) {
        if (r.monomial == m) return r;
    }
    FAIL("missing matching constraint for " + m.to_string());
    static MatchingConstraint dummy;
    return dummy;
}

Eigen::MatrixXd example_gram(double q12) {
    Eigen::MatrixXd q(3, 3);
    q << 2.0, q12, 0.0, q12, 5.0, 0.0, 0.0, 0.0, 1.0 - 2.0 * q12;
    return q;
}

double min_eig(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
}

}  // namespace

TEST_CASE("Gram parameterization of the worked example yields the printed constraints") {
    auto [block, rows] = paper_example();
    // Basis is canonicalized to graded-lex order: x^2, xy, y^2.
    REQUIRE(block.size() == 3);
    const int ix2 = 0, ixy = 1, iy2 = 2;
    REQUIRE(block.basis[ix2] == kX2);
    REQUIRE(block.basis[ixy] == kXY);
    REQUIRE(block.basis[iy2] == kY2);
    REQUIRE(rows.size() == 6);  // x^4, x^3y, x^2y^2, xy^3, y^4, and nothing else

    auto single_entry = [](const MatchingConstraint& r) {
        REQUIRE(r.entries.size() == 1);
        return r.entries[0];
    };

    {  // q11 = 2
        const auto& r = find_row(rows, Monomial::variable(0, 4));
        const auto e = single_entry(r);
        CHECK((e.row == ix2 && e.col == ix2 && e.weight == 1.0));
        CHECK(r.rhs_constant == 2.0);
    }
    {  // q22 = 5  (for the basis ordered as in the text: diagonal of y^2)
        const auto& r = find_row(rows, Monomial::variable(1, 4));
        const auto e = single_entry(r);
        CHECK((e.row == iy2 && e.col == iy2 && e.weight == 1.0));
        CHECK(r.rhs_constant == 5.0);
    }
    {  // q33 + 2 q12 = 1
        const auto& r = find_row(rows, Monomial({{0, 2}, {1, 2}}));
        REQUIRE(r.entries.size() == 2);
        CHECK(r.rhs_constant == 1.0);
        bool saw_diag = false, saw_cross = false;
        for (const auto& e : r.entries) {
            if (e.row == ixy && e.col == ixy && e.weight == 1.0) saw_diag = true;
            if (e.row == ix2 && e.col == iy2 && e.weight == 2.0) saw_cross = true;
        }
        CHECK((saw_diag && saw_cross));
    }
    {  // 2 q13 = 0 and 2 q23 = 0
        const auto& r13 = find_row(rows, Monomial({{0, 3}, {1, 1}}));
        CHECK(single_entry(r13).weight == 2.0);
        CHECK(r13.rhs_constant == 0.0);
        const auto& r23 = find_row(rows, Monomial({{0, 1}, {1, 3}}));
        CHECK(single_entry(r23).weight == 2.0);
        CHECK(r23.rhs_constant == 0.0);
    }
}

TEST_CASE("PSD feasibility interval of the free Gram parameter is [-sqrt(10), 1/2]") {
    const double s10 = std::sqrt(10.0);
    CHECK(min_eig(example_gram(-s10 + 1e-6)) >= -1e-7);
    CHECK(min_eig(example_gram(0.0)) >= 0.0);
    CHECK(min_eig(example_gram(0.5)) >= -1e-12);
    CHECK(min_eig(example_gram(-s10 - 1e-3)) < -1e-5);
    CHECK(min_eig(example_gram(0.5 + 1e-3)) < 0.0);
}

TEST_CASE("gram_parameterize of x^2 over [1, x]") {
    const Polynomial x = Polynomial::variable(1, 0);
    auto [block, rows] = gram_parameterize(LinearPolyExpr(x.pow(2)), {Monomial::unit(), Monomial::variable(0)});
    REQUIRE(rows.size() == 3);
    CHECK(find_row(rows, Monomial::variable(0, 2)).rhs_constant == 1.0);  // q22 = 1
    CHECK(find_row(rows, Monomial::unit()).rhs_constant == 0.0);          // q11 = 0
    CHECK(find_row(rows, Monomial::variable(0)).rhs_constant == 0.0);     // 2 q12 = 0
}

TEST_CASE("unrepresentable monomials are reported by name") {
    const Polynomial x = Polynomial::variable(1, 0);
    try {
        gram_parameterize(LinearPolyExpr(x.pow(6)), monomial_basis(1, 2));
        FAIL("expected UnrepresentableMonomialError");
    } catch (const UnrepresentableMonomialError& e) {
        CHECK(e.monomial() == "x0^6");
    }
}

TEST_CASE("reconstruct: identity Gram, the boundary case, and a PSD sample check") {
    const std::vector<Monomial> basis{Monomial::unit(), Monomial::variable(0)};
    CHECK(reconstruct(Eigen::MatrixXd::Identity(2, 2), basis, 1) ==
          Polynomial::constant(1, 1.0) + Polynomial::variable(1, 0).pow(2));

    // Boundary member of the example family: q12 = 1/2 forces q33 = 0.
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const Polynomial target = x.pow(4) * 2.0 + y.pow(4) * 5.0 + x.pow(2) * y.pow(2);
    CHECK(reconstruct(example_gram(0.5), {kX2, kY2, kXY}, 2).coeff_distance(target) == 0.0);

    std::mt19937 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto b3 = monomial_basis(2, 2);
    Eigen::MatrixXd r(b3.size(), b3.size());
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r(i, j) = gauss(rng);
    const Eigen::MatrixXd psd = r.transpose() * r;
    const Polynomial p = reconstruct(psd, b3, 2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const std::vector<double> pt{u(rng), u(rng)};
        CHECK(p.evaluate(pt) >= -1e-9);
    }

    CHECK_THROWS_AS(reconstruct(Eigen::MatrixXd::Identity(3, 3), basis, 1),
                    DimensionMismatchError);
}

TEST_CASE("random SOS polynomials admit a PSD Gram recovered by the round trip") {
    std::mt19937 rng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto basis = monomial_basis(2, 2);
    for (int trial = 0; trial < 4; ++trial) {
        // Build sum of squares of random quadratics.
        Polynomial target(2);
        for (int s = 0; s < 3; ++s) {
            Polynomial q(2);
            for (const auto& m : basis) q = q + Polynomial::term(2, m, gauss(rng));
            target = target + q * q;
        }
        // Margin feasibility program: maximize lambda with
        // target - lambda*sum(z_i^2) having a Gram representation.
        SosProgram prog;
        prog.nvars = 2;
        prog.decision_vars.push_back({0, "lambda", DecisionRole::Bound});
        Polynomial sum_squares(2);
        for (const auto& m : basis) sum_squares = sum_squares + Polynomial::term(2, m, 1.0).pow(2);
        LinearPolyExpr expr(target);
        expr.add_term(0, -sum_squares);
        auto [block, rows] = gram_parameterize(expr, basis);
        prog.gram_blocks = {block};
        prog.matching_constraints = rows;
        prog.objective_var = 0;
        prog.maximize = true;

        const SosSolveResult res = solve_sos(prog);
        REQUIRE(res.sdp.status == SdpStatus::Optimal);
        CHECK(res.objective >= -1e-8);  // feasible: the target is genuinely SOS
        const Polynomial back =
            reconstruct(res.gram[0] + res.objective * Eigen::MatrixXd::Identity(
                                          block.size(), block.size()),
                        block.basis, 2);
        CHECK(back.coeff_distance(target) < 1e-8);
        CHECK(min_eig(res.gram[0]) >= -1e-7);
    }
}

TEST_CASE("s_procedure: scalar multiplier on [-1,1] certifies max x^2 = 1") {
    const Polynomial x = Polynomial::variable(1, 0);
    SosProgram prog;
    prog.nvars = 1;
    prog.decision_vars.push_back({0, "U", DecisionRole::Bound});
    LinearPolyExpr certified(-(x.pow(2)));
    certified.add_term(0, Polynomial::constant(1, 1.0));

    SemialgebraicSet set;
    set.inequalities = {Polynomial::constant(1, 1.0) - x.pow(2)};
    int next_id = 1, next_block = 0;
    SProcedureResult sp = s_procedure(certified, set, 0, 2, next_id, next_block);
    REQUIRE(sp.sos_multiplier_blocks.size() == 1);
    REQUIRE(sp.sos_multiplier_blocks[0].size() == 1);  // scalar s0
    CHECK(sp.free_multiplier_vars.empty());

    prog.gram_blocks = sp.sos_multiplier_blocks;
    GramBlock main;
    main.block_id = next_block++;
    main.basis = monomial_basis(1, 1);
    main.weight = Polynomial::constant(1, 1.0);
    prog.gram_blocks.push_back(main);
    prog.matching_constraints = build_matching(sp.certified, prog.gram_blocks);
    prog.objective_var = 0;

    const SosSolveResult res = solve_sos(prog);
    REQUIRE(res.sdp.status == SdpStatus::Optimal);
    CHECK(res.objective == Approx(1.0).margin(1e-6));
    CHECK(res.gram[0](0, 0) == Approx(1.0).margin(1e-5));  // s0 = 1 at the optimum
    CHECK(res.matching_residual < 1e-8);

    // Sampled soundness: the certified expression at the optimum is
    // nonnegative inside the set.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Polynomial at_opt = sp.certified.at(res.decisions);
    for (int i = 0; i < 1000; ++i) {
        const std::vector<double> pt{u(rng)};
        const double s0 = res.gram[0](0, 0);
        const double g = 1.0 - pt[0] * pt[0];
        CHECK(at_opt.evaluate(pt) - s0 * g >= -1e-6);
    }
}

TEST_CASE("s_procedure: empty set leaves the expression untouched") {
    const Polynomial x = Polynomial::variable(1, 0);
    LinearPolyExpr certified(x.pow(2));
    int next_id = 0, next_block = 0;
    SProcedureResult sp = s_procedure(certified, SemialgebraicSet{}, 2, 4, next_id, next_block);
    CHECK(sp.sos_multiplier_blocks.empty());
    CHECK(sp.free_multiplier_vars.empty());
    CHECK(sp.certified.constant == certified.constant);
    CHECK(sp.certified.coeffs.empty());
}

TEST_CASE("s_procedure: equality multipliers are free and degree bookkeeping is enforced") {
    const int n = 2;
    const Polynomial x = Polynomial::variable(n, 0), y = Polynomial::variable(n, 1);
    SemialgebraicSet set;
    set.equalities = {Polynomial::constant(n, 1.0) - x * x - y * y};
    LinearPolyExpr certified(x.pow(2));
    int next_id = 0, next_block = 0;
    SProcedureResult sp = s_procedure(certified, set, 2, 4, next_id, next_block);
    CHECK(sp.sos_multiplier_blocks.empty());
    CHECK(sp.free_multiplier_vars.size() == monomial_basis(n, 2).size());
    // Each free coefficient contributes -h * monomial to the expression.
    CHECK(sp.certified.coeffs.size() == sp.free_multiplier_vars.size());

    CHECK_THROWS_AS(s_procedure(certified, set, 4, 4, next_id, next_block),
                    std::invalid_argument);
    SemialgebraicSet odd_set;
    odd_set.inequalities = {x};
    CHECK_THROWS_AS(s_procedure(certified, odd_set, 3, 4, next_id, next_block),
                    std::invalid_argument);
}

TEST_CASE("sign symmetry detection and block splitting") {
    // Duffing-lifted style field is equivariant under flipping every variable.
    const int n = 2;
    const Polynomial x = Polynomial::variable(n, 0), y = Polynomial::variable(n, 1);
    const std::vector<Polynomial> field{y, -x - x.pow(3)};
    SemialgebraicSet set;
    const SignSymmetry sym = detect_sign_symmetry(field, x.pow(2), set);
    REQUIRE(sym.flip_masks.size() == 1);
    CHECK(sym.flip_masks[0] == 0b11u);
    CHECK(sym.invariant(Monomial({{0, 1}, {1, 1}})));
    CHECK_FALSE(sym.invariant(Monomial::variable(0)));

    const auto classes = sym.split_by_character(monomial_basis(n, 2));
    REQUIRE(classes.size() == 2);
    CHECK(classes[0].size() + classes[1].size() == 6);

    // An asymmetric observable kills the symmetry.
    const SignSymmetry none = detect_sign_symmetry(field, x.pow(2) + x, set);
    CHECK(none.trivial());
}

TEST_CASE("zero-diagonal trimming removes unreachable basis monomials") {
    // Certify x^2 over the oversized basis [1, x, x^2]: the x^2 diagonal
    // (monomial x^4) has empty rhs, so trimming must drop it; then 1 remains
    // only through q11 = 0 and gets dropped in the second sweep.
    const Polynomial x = Polynomial::variable(1, 0);
    auto [block, rows] = gram_parameterize(LinearPolyExpr(x.pow(2)), monomial_basis(1, 2));
    SosProgram prog;
    prog.nvars = 1;
    prog.gram_blocks = {block};
    prog.matching_constraints = rows;
    const int removed = trim_zero_diagonals(prog);
    CHECK(removed >= 1);
    REQUIRE(prog.gram_blocks.size() == 1);
    for (const auto& m : prog.gram_blocks[0].basis) CHECK(m.total_degree() <= 1);
}

TEST_CASE("matching dump is one line per monomial") {
    auto [block, rows] = paper_example();
    SosProgram prog;
    prog.nvars = 2;
    prog.gram_blocks = {block};
    prog.matching_constraints = rows;
    const std::string dump = prog.dump_matching(std::vector<std::string>{"x", "y"});
    CHECK(std::count(dump.begin(), dump.end(), '\n') == 6);
    CHECK(dump.find("x^4: Q0[1,1] = 2") != std::string::npos);
}
