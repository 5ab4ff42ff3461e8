#include "sosbound/sos_to_sdp.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sosbound {

namespace {

constexpr double kEqualityConsistencyTol = 1e-7;
constexpr double kRankRelTol = 1e-10;
// Kernel cut on eigenvalues of the stacked Gram, relative to its largest
// eigenvalue. Must sit above the symmetric-eigensolver noise floor
// (~n*eps*lambda_max) or forced kernel directions leak through and the LMI
// loses its interior.
constexpr double kKernelRelTol = 1e-11;

struct BlockStructure {
    int original_dim = 0;
    // (moment index, row, col, weight): entry contributes weight*y[alpha] to
    // the (row, col) and (col, row) positions (half each off the diagonal).
    std::vector<std::array<double, 4>> entries;

    Eigen::MatrixXd materialize(const Eigen::VectorXd& y) const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(original_dim, original_dim);
        for (const auto& e : entries) {
            const int a = static_cast<int>(e[0]);
            const int r = static_cast<int>(e[1]);
            const int c = static_cast<int>(e[2]);
            const double v = e[3] * y[a];
            if (r == c) {
                m(r, r) += v;
            } else {
                m(r, c) += 0.5 * v;
                m(c, r) += 0.5 * v;
            }
        }
        return m;
    }
};

}  // namespace

SosAssembly assemble_sdp(const SosProgram& prog) {
    const int ndec = prog.num_decisions();
    for (int i = 0; i < ndec; ++i) {
        if (prog.decision_vars[i].id != i)
            throw std::invalid_argument("assemble_sdp: decision ids must be 0..n-1 in order");
    }
    if (prog.matching_constraints.empty())
        throw std::invalid_argument("assemble_sdp: empty matching system");

    SosAssembly assembly;
    assembly.sense = prog.maximize ? -1 : +1;

    // Moment index space: one coordinate per matching monomial.
    std::vector<const MatchingConstraint*> rows;
    rows.reserve(prog.matching_constraints.size());
    for (const auto& c : prog.matching_constraints) rows.push_back(&c);
    std::sort(rows.begin(), rows.end(), [](const MatchingConstraint* a,
                                           const MatchingConstraint* b) {
        return graded_lex_less(a->monomial, b->monomial);
    });
    const int m_dim = static_cast<int>(rows.size());
    std::map<Monomial, int, GradedLexLess> moment_index;
    assembly.moments.reserve(m_dim);
    for (int i = 0; i < m_dim; ++i) {
        if (!moment_index.emplace(rows[i]->monomial, i).second)
            throw std::invalid_argument("assemble_sdp: duplicate matching monomial");
        assembly.moments.push_back(rows[i]->monomial);
    }

    // Decision-direction equalities R y = sense * e_objective, plus the
    // constant parts c of the matching right-hand sides.
    Eigen::MatrixXd r_mat = Eigen::MatrixXd::Zero(std::max(ndec, 1), m_dim);
    Eigen::VectorXd c_vec = Eigen::VectorXd::Zero(m_dim);
    for (int a = 0; a < m_dim; ++a) {
        c_vec[a] = rows[a]->rhs_constant;
        for (const auto& [id, w] : rows[a]->rhs_coeffs) {
            if (id < 0 || id >= ndec)
                throw std::invalid_argument("assemble_sdp: constraint references unknown decision");
            r_mat(id, a) += w;
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(std::max(ndec, 1));
    if (prog.objective_var >= 0) {
        if (prog.objective_var >= ndec)
            throw std::invalid_argument("assemble_sdp: objective variable out of range");
        rhs[prog.objective_var] = static_cast<double>(assembly.sense);
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(r_mat, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double sigma_max = sigma.size() ? sigma[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma[i] > kRankRelTol * std::max(1.0, sigma_max)) ++rank;

    assembly.svd_u = svd.matrixU();
    assembly.svd_sigma = sigma;
    assembly.svd_v = svd.matrixV();
    assembly.rank = rank;
    assembly.rhs_constants = c_vec;

    // Minimum-norm particular solution of R y = rhs.
    Eigen::VectorXd w = assembly.svd_u.transpose() * rhs;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(assembly.svd_v.cols());
    for (int i = 0; i < rank; ++i) z[i] = w[i] / sigma[i];
    assembly.y_particular = assembly.svd_v * z;
    const double consistency =
        (r_mat * assembly.y_particular - rhs).cwiseAbs().maxCoeff();
    if (consistency > kEqualityConsistencyTol * (1.0 + rhs.cwiseAbs().maxCoeff()))
        throw std::runtime_error(
            "assemble_sdp: decision equalities are inconsistent (residual " +
            std::to_string(consistency) + "); the program admits no normalized moment vector");

    const int m_free = m_dim - rank;
    assembly.null_basis = assembly.svd_v.rightCols(m_free);

    // Gram block structures in moment coordinates.
    std::vector<BlockStructure> structures(prog.gram_blocks.size());
    std::map<int, int> block_of_id;
    for (size_t k = 0; k < prog.gram_blocks.size(); ++k) {
        structures[k].original_dim = prog.gram_blocks[k].size();
        block_of_id[prog.gram_blocks[k].block_id] = static_cast<int>(k);
    }
    for (int a = 0; a < m_dim; ++a) {
        for (const auto& e : rows[a]->entries) {
            auto it = block_of_id.find(e.block);
            if (it == block_of_id.end())
                throw std::invalid_argument("assemble_sdp: entry references unknown block");
            structures[it->second].entries.push_back(
                {static_cast<double>(a), static_cast<double>(e.row), static_cast<double>(e.col),
                 e.weight});
        }
    }

    // Materialize C and A blocks, then compress identically-forced kernels.
    SdpProblem& sdp = assembly.sdp;
    sdp.b = -(assembly.null_basis.transpose() * c_vec);
    assembly.objective_offset = -c_vec.dot(assembly.y_particular);
    assembly.reducers.resize(structures.size());

    for (size_t k = 0; k < structures.size(); ++k) {
        const auto& st = structures[k];
        const int n = st.original_dim;
        Eigen::MatrixXd c_full = st.materialize(assembly.y_particular);  // moment matrix at y_p
        std::vector<Eigen::MatrixXd> a_full(m_free);
        for (int j = 0; j < m_free; ++j)
            a_full[j] = -st.materialize(assembly.null_basis.col(j));

        Eigen::MatrixXd gram = c_full.transpose() * c_full;
        for (const auto& a : a_full) gram += a.transpose() * a;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        const double lam_max = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
        std::vector<int> keep;
        for (int i = 0; i < n; ++i)
            if (es.eigenvalues()[i] > kKernelRelTol * std::max(1e-300, lam_max)) keep.push_back(i);
        if (keep.empty()) {
            assembly.reducers[k] = Eigen::MatrixXd::Zero(n, 0);
            continue;  // block is identically zero on the feasible subspace
        }
        Eigen::MatrixXd basis(n, static_cast<int>(keep.size()));
        for (size_t i = 0; i < keep.size(); ++i) basis.col(i) = es.eigenvectors().col(keep[i]);
        assembly.reducers[k] = basis;

        Eigen::MatrixXd c_red = basis.transpose() * c_full * basis;
        sdp.c_blocks.push_back(0.5 * (c_red + c_red.transpose()));
        sdp.a_blocks.emplace_back();
        sdp.a_blocks.back().reserve(m_free);
        for (int j = 0; j < m_free; ++j) {
            Eigen::MatrixXd a_red = basis.transpose() * a_full[j] * basis;
            sdp.a_blocks.back().push_back(0.5 * (a_red + a_red.transpose()));
        }
    }
    if (sdp.c_blocks.empty())
        throw std::runtime_error("assemble_sdp: every Gram block collapsed to dimension zero");
    return assembly;
}

SosSolveResult recover_certificate(const SosProgram& prog, const SosAssembly& assembly,
                                   SdpSolution sdp_solution) {
    SosSolveResult result;
    result.sdp = std::move(sdp_solution);
    result.sdp_value =
        assembly.sense * (assembly.objective_offset + result.sdp.primal_objective);

    // Grams in the original bases (zero-padded where blocks were compressed).
    result.gram.reserve(prog.gram_blocks.size());
    size_t solver_block = 0;
    for (size_t k = 0; k < prog.gram_blocks.size(); ++k) {
        const int n = prog.gram_blocks[k].size();
        const Eigen::MatrixXd& basis = assembly.reducers[k];
        if (basis.cols() == 0) {
            result.gram.emplace_back(Eigen::MatrixXd::Zero(n, n));
            continue;
        }
        const Eigen::MatrixXd& x = result.sdp.x_blocks.at(solver_block++);
        result.gram.push_back(basis * x * basis.transpose());
    }

    // Recover the decision variables from the matching system (min-norm
    // least squares through the stored SVD of R).
    const int m_dim = static_cast<int>(assembly.moments.size());
    std::map<Monomial, int, GradedLexLess> index;
    for (int i = 0; i < m_dim; ++i) index.emplace(assembly.moments[i], i);
    std::map<int, int> block_pos;
    for (size_t k = 0; k < prog.gram_blocks.size(); ++k)
        block_pos[prog.gram_blocks[k].block_id] = static_cast<int>(k);

    Eigen::VectorXd q = -assembly.rhs_constants;
    for (const auto& c : prog.matching_constraints) {
        const int a = index.at(c.monomial);
        for (const auto& e : c.entries) {
            const Eigen::MatrixXd& g = result.gram[block_pos.at(e.block)];
            q[a] += e.weight * g(e.row, e.col);
        }
    }
    // L = R^T = V Sigma U^T; min-norm solution of L delta = q.
    Eigen::VectorXd w = assembly.svd_v.transpose() * q;
    const int ndec = prog.num_decisions();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(assembly.svd_u.cols());
    for (int i = 0; i < assembly.rank; ++i) z[i] = w[i] / assembly.svd_sigma[i];
    result.decisions = (assembly.svd_u * z).head(ndec);

    // Residual of the matching system at the recovered certificate.
    Eigen::VectorXd residual = -q;
    for (const auto& c : prog.matching_constraints) {
        const int a = index.at(c.monomial);
        for (const auto& [id, coef] : c.rhs_coeffs) residual[a] += coef * result.decisions[id];
    }
    result.matching_residual = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;

    result.objective =
        prog.objective_var >= 0 ? result.decisions[prog.objective_var] : result.sdp_value;
    return result;
}

SosSolveResult solve_sos(const SosProgram& prog, const SdpOptions& opts) {
    const SosAssembly assembly = assemble_sdp(prog);
    SdpSolution sol = solve(assembly.sdp, opts);
    return recover_certificate(prog, assembly, std::move(sol));
}

}  // namespace sosbound
