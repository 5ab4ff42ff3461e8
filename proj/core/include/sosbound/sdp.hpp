#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sosbound {

/// Block-diagonal linear-matrix-inequality problem in the form
///     max  b . y   s.t.   C_k - sum_i y_i A_{k,i}  is PSD for every block k.
/// All matrices are symmetric; the same i indexes one scalar variable across
/// every block.
struct SdpProblem {
    std::vector<Eigen::MatrixXd> c_blocks;
    std::vector<std::vector<Eigen::MatrixXd>> a_blocks;  // a_blocks[k][i]
    Eigen::VectorXd b;

    int num_vars() const { return static_cast<int>(b.size()); }
    int num_blocks() const { return static_cast<int>(c_blocks.size()); }
    int total_dim() const;
    /// Throws if shapes disagree or any matrix deviates from symmetry by more
    /// than sym_tol (entries are symmetrized in place by the solver anyway).
    void validate(double sym_tol = 1e-12) const;
};

enum class SdpStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIterations, NumericalFailure };

std::string to_string(SdpStatus s);

struct SdpOptions {
    double gap_tol = 1e-8;   // relative duality gap
    double feas_tol = 1e-8;  // relative primal/dual residuals
    int max_iterations = 200;
    double step_fraction = 0.98;
    double divergence_norm = 1e10;
    bool verbose = false;
};

struct SdpIterate {
    int iteration = 0;
    double primal_objective = 0.0;  // b . y
    double dual_objective = 0.0;    // <C, X>
    double gap = 0.0;               // <X, S>
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double step_primal = 0.0;
    double step_dual = 0.0;
};

struct SdpSolution {
    Eigen::VectorXd y;
    std::vector<Eigen::MatrixXd> x_blocks;  // dual certificate (Gram side)
    double primal_objective = 0.0;          // b . y
    double dual_objective = 0.0;            // <C, X>
    double gap = 0.0;
    SdpStatus status = SdpStatus::NumericalFailure;
    int iterations = 0;
    std::vector<SdpIterate> log;

    /// Line-oriented text of the iteration log.
    std::string log_text() const;
};

/// Primal-dual interior-point solve (predictor-corrector with the symmetrized
/// XS+SX Newton direction and a dense Schur complement).
SdpSolution solve(const SdpProblem& prob, const SdpOptions& opts = {});

/// Independent recomputation of optimality evidence for a solution.
struct CertificateCheck {
    struct Line {
        std::string name;
        double value = 0.0;
        double tolerance = 0.0;
        bool pass = false;
    };
    std::vector<Line> lines;
    bool all_passed = true;
    std::string report() const;
};

CertificateCheck check_certificate(const SdpProblem& prob, const SdpSolution& sol,
                                   double feas_tol = 1e-8, double psd_floor = -1e-7);

}  // namespace sosbound
