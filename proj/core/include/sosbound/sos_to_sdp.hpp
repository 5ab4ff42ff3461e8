#pragma once

#include "sosbound/sdp.hpp"
#include "sosbound/soscert.hpp"

namespace sosbound {

/// An SosProgram lowered to the block LMI form. The decision variables and
/// matching equalities are dualized: the LMI variables parameterize the
/// affine family of moment vectors annihilating every decision-variable
/// direction, the blocks are the corresponding moment/localizing matrices,
/// and block kernels that are forced identically by the equalities are
/// compressed away. The SOS optimum equals sense * (offset + b.t*).
struct SosAssembly {
    SdpProblem sdp;
    double objective_offset = 0.0;
    int sense = +1;  // +1 when the SOS program minimizes, -1 when it maximizes

    std::vector<Monomial> moments;        // constraint monomials, graded-lex
    Eigen::VectorXd y_particular;         // one moment vector satisfying the equalities
    Eigen::MatrixXd null_basis;           // moment directions free after elimination
    Eigen::VectorXd rhs_constants;        // c[alpha]
    std::vector<Eigen::MatrixXd> reducers;  // per gram block: original dim x kept dim

    // SVD of the decision-constraint matrix, kept for certificate recovery.
    Eigen::MatrixXd svd_u;
    Eigen::VectorXd svd_sigma;
    Eigen::MatrixXd svd_v;
    int rank = 0;
};

SosAssembly assemble_sdp(const SosProgram& prog);

struct SosSolveResult {
    double objective = 0.0;          // recovered value of the objective variable
    double sdp_value = 0.0;          // sense * (offset + b.t) from the solver
    Eigen::VectorXd decisions;       // indexed by decision id
    std::vector<Eigen::MatrixXd> gram;  // per gram block, in the original basis
    double matching_residual = 0.0;  // inf-norm residual of the matching system
    SdpSolution sdp;
};

/// Pull the SOS-side certificate out of a solved LMI.
SosSolveResult recover_certificate(const SosProgram& prog, const SosAssembly& assembly,
                                   SdpSolution sdp_solution);

/// assemble + solve + recover in one step.
SosSolveResult solve_sos(const SosProgram& prog, const SdpOptions& opts = {});

}  // namespace sosbound
