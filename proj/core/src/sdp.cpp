#include "sosbound/sdp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sosbound {

int SdpProblem::total_dim() const {
    int n = 0;
    for (const auto& c : c_blocks) n += static_cast<int>(c.rows());
    return n;
}

void SdpProblem::validate(double sym_tol) const {
    if (c_blocks.empty()) throw std::invalid_argument("SdpProblem: at least one block required");
    if (a_blocks.size() != c_blocks.size())
        throw std::invalid_argument("SdpProblem: a_blocks/c_blocks size mismatch");
    const int m = num_vars();
    for (size_t k = 0; k < c_blocks.size(); ++k) {
        const auto& c = c_blocks[k];
        if (c.rows() != c.cols()) throw std::invalid_argument("SdpProblem: C block not square");
        if ((c - c.transpose()).cwiseAbs().maxCoeff() >
            sym_tol * std::max(1.0, c.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("SdpProblem: C block not symmetric");
        if (static_cast<int>(a_blocks[k].size()) != m)
            throw std::invalid_argument("SdpProblem: one A block per variable required");
        for (const auto& a : a_blocks[k]) {
            if (a.rows() != c.rows() || a.cols() != c.cols())
                throw std::invalid_argument("SdpProblem: A block size mismatch");
            if ((a - a.transpose()).cwiseAbs().maxCoeff() >
                sym_tol * std::max(1.0, a.cwiseAbs().maxCoeff()))
                throw std::invalid_argument("SdpProblem: A block not symmetric");
        }
    }
}

std::string to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal: return "Optimal";
        case SdpStatus::PrimalInfeasible: return "PrimalInfeasible";
        case SdpStatus::DualInfeasible: return "DualInfeasible";
        case SdpStatus::MaxIterations: return "MaxIterations";
        case SdpStatus::NumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

std::string SdpSolution::log_text() const {
    std::ostringstream os;
    char buf[192];
    for (const auto& it : log) {
        std::snprintf(buf, sizeof(buf),
                      "iter %3d  primal % .12e  dual % .12e  gap %.3e  resP %.3e  resD %.3e  "
                      "aP %.3f  aD %.3f",
                      it.iteration, it.primal_objective, it.dual_objective, it.gap,
                      it.primal_residual, it.dual_residual, it.step_primal, it.step_dual);
        os << buf << "\n";
    }
    return os.str();
}

std::string CertificateCheck::report() const {
    std::ostringstream os;
    char buf[160];
    for (const auto& line : lines) {
        std::snprintf(buf, sizeof(buf), "%-28s % .6e  (tol % .2e)  %s", line.name.c_str(),
                      line.value, line.tolerance, line.pass ? "pass" : "FAIL");
        os << buf << "\n";
    }
    return os.str();
}

CertificateCheck check_certificate(const SdpProblem& prob, const SdpSolution& sol,
                                   double feas_tol, double psd_floor) {
    CertificateCheck check;
    auto push = [&](std::string name, double value, double tol, bool pass) {
        check.lines.push_back({std::move(name), value, tol, pass});
        check.all_passed = check.all_passed && pass;
    };

    const int m = prob.num_vars();
    // Slack PSD-ness, recomputed from scratch with an eigensolver.
    double min_slack_eig = 0.0;
    double min_x_eig = 0.0;
    double dual_obj = 0.0;
    Eigen::VectorXd ax = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < prob.num_blocks(); ++k) {
        Eigen::MatrixXd slack = prob.c_blocks[k];
        for (int i = 0; i < m; ++i) slack -= sol.y[i] * prob.a_blocks[k][i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(slack, Eigen::EigenvaluesOnly);
        min_slack_eig = std::min(min_slack_eig, es.eigenvalues().minCoeff());
        if (k < static_cast<int>(sol.x_blocks.size())) {
            const auto& x = sol.x_blocks[k];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(x, Eigen::EigenvaluesOnly);
            min_x_eig = std::min(min_x_eig, ex.eigenvalues().minCoeff());
            dual_obj += prob.c_blocks[k].cwiseProduct(x).sum();
            for (int i = 0; i < m; ++i) ax[i] += prob.a_blocks[k][i].cwiseProduct(x).sum();
        }
    }
    const double b_scale = 1.0 + (m > 0 ? prob.b.cwiseAbs().maxCoeff() : 0.0);
    const double primal_obj = m > 0 ? prob.b.dot(sol.y) : 0.0;
    const double gap = dual_obj - primal_obj;
    const double gap_rel = std::abs(gap) / (1.0 + std::abs(dual_obj) + std::abs(primal_obj));
    const double primal_res = m > 0 ? (prob.b - ax).cwiseAbs().maxCoeff() / b_scale : 0.0;

    push("slack min eigenvalue", min_slack_eig, psd_floor, min_slack_eig >= psd_floor);
    push("X min eigenvalue", min_x_eig, psd_floor, min_x_eig >= psd_floor);
    push("primal residual |b-A(X)|", primal_res, feas_tol * 10.0, primal_res <= feas_tol * 10.0);
    push("relative gap", gap_rel, feas_tol * 100.0, gap_rel <= feas_tol * 100.0);
    push("gap sign (weak duality)", gap, -1e-7, gap >= -1e-7 * (1.0 + std::abs(dual_obj)));
    return check;
}

}  // namespace sosbound
