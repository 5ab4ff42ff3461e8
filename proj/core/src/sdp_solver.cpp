#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sosbound/sdp.hpp"

namespace sosbound {

namespace {

struct BlockWork {
    Eigen::MatrixXd x, s;                // current iterate
    Eigen::MatrixXd dres;                // dual residual C - sum y A - S
    Eigen::LLT<Eigen::MatrixXd> s_llt;   // factorization of S
    Eigen::MatrixXd sinv;                // explicit inverse of S
    Eigen::MatrixXd dx_pred, ds_pred;    // predictor direction
    Eigen::MatrixXd dx, ds;              // combined direction
};

double inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.cwiseProduct(b).sum();
}

/// Largest alpha in (0, +inf] with M + alpha*D staying PSD; M must be PD.
double max_step(const Eigen::MatrixXd& m, const Eigen::MatrixXd& d) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return 0.0;
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd tmp = l.triangularView<Eigen::Lower>().solve(d);
    const Eigen::MatrixXd scaled =
        l.triangularView<Eigen::Lower>().solve(tmp.transpose()).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (scaled + scaled.transpose()),
                                                      Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().minCoeff();
    if (lam >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / lam;
}

SdpSolution solve_no_vars(const SdpProblem& prob, const SdpOptions& opts) {
    // Pure feasibility question: is every C block PSD?
    SdpSolution sol;
    sol.y = Eigen::VectorXd::Zero(0);
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& c : prob.c_blocks) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        sol.x_blocks.emplace_back(Eigen::MatrixXd::Zero(c.rows(), c.cols()));
    }
    sol.status = min_eig >= -opts.feas_tol ? SdpStatus::Optimal : SdpStatus::DualInfeasible;
    return sol;
}

}  // namespace

SdpSolution solve(const SdpProblem& prob, const SdpOptions& opts) {
    prob.validate(1e-9);
    if (prob.num_vars() == 0) return solve_no_vars(prob, opts);

    const int m = prob.num_vars();
    const int nblocks = prob.num_blocks();
    const int n_total = prob.total_dim();

    std::vector<BlockWork> blocks(nblocks);
    double a_scale = 0.0, c_scale = 0.0;
    for (int k = 0; k < nblocks; ++k) {
        c_scale = std::max(c_scale, prob.c_blocks[k].norm());
        for (const auto& a : prob.a_blocks[k]) a_scale = std::max(a_scale, a.norm());
    }
    const double b_scale = prob.b.size() ? prob.b.cwiseAbs().maxCoeff() : 0.0;

    // Infeasible start on a generous multiple of the identity.
    for (int k = 0; k < nblocks; ++k) {
        const int n = static_cast<int>(prob.c_blocks[k].rows());
        double xi = std::max({10.0, std::sqrt(static_cast<double>(n)),
                              n * (1.0 + b_scale) / (1.0 + a_scale)});
        double eta = std::max({10.0, std::sqrt(static_cast<double>(n)),
                               (1.0 + std::max(c_scale, a_scale)) / std::sqrt(double(n))});
        blocks[k].x = xi * Eigen::MatrixXd::Identity(n, n);
        blocks[k].s = eta * Eigen::MatrixXd::Identity(n, n);
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

    SdpSolution sol;
    SdpSolution best;
    double best_score = std::numeric_limits<double>::infinity();
    auto snapshot = [&](SdpSolution& dst) {
        dst.y = y;
        dst.x_blocks.clear();
        for (auto& blk : blocks) dst.x_blocks.push_back(blk.x);
    };

    Eigen::VectorXd p_res(m), schur_rhs(m), dy(m);
    Eigen::MatrixXd schur(m, m);
    int stalled = 0;

    // Exit path: least-norm restoration of A(X) = b on the candidate, then an
    // honest reclassification against the requested tolerances (slack
    // eigenvalue, primal residual, relative gap). A run that stalled after
    // effectively converging still reports Optimal this way.
    Eigen::LDLT<Eigen::MatrixXd> amap_ldlt;
    bool amap_ready = false;
    auto finalize = [&](SdpSolution out, SdpStatus fallback, int iters) {
        out.log = sol.log;
        out.iterations = iters;
        out.status = fallback;
        if (out.x_blocks.empty() || out.y.size() != m) return out;
        if (!amap_ready) {
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
            for (int k = 0; k < nblocks; ++k)
                for (int j = 0; j < m; ++j)
                    for (int i = 0; i <= j; ++i)
                        g(i, j) += inner(prob.a_blocks[k][i], prob.a_blocks[k][j]);
            schur = g.selfadjointView<Eigen::Upper>();
            schur.diagonal().array() += 1e-12 * std::max(1.0, schur.trace() / std::max(m, 1));
            amap_ldlt.compute(schur);
            amap_ready = amap_ldlt.info() == Eigen::Success;
            if (!amap_ready) return out;
        }
        Eigen::VectorXd rp = prob.b;
        for (int k = 0; k < nblocks; ++k)
            for (int i = 0; i < m; ++i) rp[i] -= inner(prob.a_blocks[k][i], out.x_blocks[k]);
        const Eigen::VectorXd lam = amap_ldlt.solve(rp);
        std::vector<Eigen::MatrixXd> corrected = out.x_blocks;
        for (int k = 0; k < nblocks; ++k)
            for (int i = 0; i < m; ++i) corrected[k] += lam[i] * prob.a_blocks[k][i];
        bool psd_ok = true;
        for (const auto& xk : corrected) {
            if (Eigen::LLT<Eigen::MatrixXd>(xk).info() != Eigen::Success) {
                psd_ok = false;
                break;
            }
        }
        if (psd_ok) out.x_blocks = std::move(corrected);

        double dual_obj = 0.0, slack_min = 0.0;
        Eigen::VectorXd rp2 = prob.b;
        for (int k = 0; k < nblocks; ++k) {
            dual_obj += inner(prob.c_blocks[k], out.x_blocks[k]);
            Eigen::MatrixXd slack = prob.c_blocks[k];
            for (int i = 0; i < m; ++i) {
                rp2[i] -= inner(prob.a_blocks[k][i], out.x_blocks[k]);
                slack -= out.y[i] * prob.a_blocks[k][i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(slack, Eigen::EigenvaluesOnly);
            slack_min = std::min(slack_min, es.eigenvalues().minCoeff());
        }
        const double primal_obj = prob.b.dot(out.y);
        out.primal_objective = primal_obj;
        out.dual_objective = dual_obj;
        out.gap = dual_obj - primal_obj;
        const double rel_gap =
            std::abs(out.gap) / (1.0 + std::abs(primal_obj) + std::abs(dual_obj));
        const double rel_p = rp2.cwiseAbs().maxCoeff() / (1.0 + b_scale);
        if (rel_gap <= opts.gap_tol && rel_p <= opts.feas_tol &&
            slack_min >= -opts.feas_tol * (1.0 + c_scale))
            out.status = SdpStatus::Optimal;
        return out;
    };

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        // Residuals and objective values.
        double dual_obj = 0.0, gap = 0.0, d_res_norm = 0.0;
        p_res = prob.b;
        for (int k = 0; k < nblocks; ++k) {
            auto& blk = blocks[k];
            dual_obj += inner(prob.c_blocks[k], blk.x);
            gap += inner(blk.x, blk.s);
            blk.dres = prob.c_blocks[k] - blk.s;
            for (int i = 0; i < m; ++i) {
                p_res[i] -= inner(prob.a_blocks[k][i], blk.x);
                blk.dres -= y[i] * prob.a_blocks[k][i];
            }
            d_res_norm = std::max(d_res_norm, blk.dres.cwiseAbs().maxCoeff());
        }
        const double primal_obj = prob.b.dot(y);
        const double mu = gap / n_total;
        const double obj_scale = 1.0 + std::abs(primal_obj) + std::abs(dual_obj);
        const double rel_gap = std::abs(dual_obj - primal_obj) / obj_scale;
        const double rel_p = p_res.cwiseAbs().maxCoeff() / (1.0 + b_scale);
        const double rel_d = d_res_norm / (1.0 + c_scale);

        SdpIterate it{iter, primal_obj, dual_obj, gap, rel_p, rel_d, 0.0, 0.0};
        sol.log.push_back(it);
        sol.iterations = iter;
        sol.primal_objective = primal_obj;
        sol.dual_objective = dual_obj;
        sol.gap = dual_obj - primal_obj;

        const double score = std::max({rel_gap, rel_p, rel_d});
        if (score < best_score) {
            best_score = score;
            snapshot(best);
            best.primal_objective = primal_obj;
            best.dual_objective = dual_obj;
            best.gap = dual_obj - primal_obj;
        }

        if (rel_gap <= opts.gap_tol && rel_p <= opts.feas_tol && rel_d <= opts.feas_tol) {
            snapshot(sol);
            return finalize(sol, SdpStatus::MaxIterations, iter);
        }
        if (y.cwiseAbs().maxCoeff() > opts.divergence_norm) {
            snapshot(sol);
            sol.status = SdpStatus::PrimalInfeasible;
            return sol;
        }
        double x_norm = 0.0;
        for (auto& blk : blocks) x_norm = std::max(x_norm, blk.x.cwiseAbs().maxCoeff());
        if (x_norm > opts.divergence_norm) {
            snapshot(sol);
            sol.status = SdpStatus::DualInfeasible;
            return sol;
        }

        // Factor the slacks and build the Schur complement
        //   M_ij = sum_k <A_i, X A_j S^{-1}>.
        schur.setZero();
        Eigen::VectorXd d_vec = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd s_vec = Eigen::VectorXd::Zero(m);
        bool factor_ok = true;
        for (int k = 0; k < nblocks && factor_ok; ++k) {
            auto& blk = blocks[k];
            blk.s_llt.compute(blk.s);
            if (blk.s_llt.info() != Eigen::Success) {
                factor_ok = false;
                break;
            }
            const int n = static_cast<int>(blk.s.rows());
            blk.sinv = blk.s_llt.solve(Eigen::MatrixXd::Identity(n, n));
            const Eigen::MatrixXd xds = blk.x * blk.dres * blk.sinv;
            for (int i = 0; i < m; ++i) {
                d_vec[i] += inner(prob.a_blocks[k][i], xds);
                s_vec[i] += inner(prob.a_blocks[k][i], blk.sinv);
            }
            for (int j = 0; j < m; ++j) {
                const Eigen::MatrixXd t = blk.x * prob.a_blocks[k][j] * blk.sinv;
                for (int i = 0; i <= j; ++i) schur(i, j) += inner(prob.a_blocks[k][i], t);
            }
        }
        if (!factor_ok) return finalize(best, SdpStatus::NumericalFailure, iter);
        schur = schur.selfadjointView<Eigen::Upper>();

        Eigen::LDLT<Eigen::MatrixXd> schur_ldlt;
        const double ridge_base = schur.trace() / m;
        bool solved = false;
        for (double ridge : {0.0, 1e-13, 1e-10, 1e-7}) {
            Eigen::MatrixXd reg = schur;
            if (ridge > 0.0) reg.diagonal().array() += ridge * ridge_base;
            schur_ldlt.compute(reg);
            if (schur_ldlt.info() == Eigen::Success && schur_ldlt.isPositive()) {
                solved = true;
                break;
            }
        }
        if (!solved) return finalize(best, SdpStatus::NumericalFailure, iter);
        // The Schur system turns severely ill-conditioned as mu -> 0;
        // iterative refinement against the unregularized matrix recovers the
        // step accuracy that direct substitution loses.
        auto schur_solve = [&](const Eigen::VectorXd& rhs) {
            Eigen::VectorXd x = schur_ldlt.solve(rhs);
            for (int r = 0; r < 2; ++r) {
                const Eigen::VectorXd residual = rhs - schur * x;
                x += schur_ldlt.solve(residual);
            }
            return x;
        };

        // Predictor: pure Newton step toward feasibility and complementarity.
        schur_rhs = prob.b + d_vec;
        dy = schur_solve(schur_rhs);
        double alpha_p = 1.0, alpha_d = 1.0;
        for (int k = 0; k < nblocks; ++k) {
            auto& blk = blocks[k];
            blk.ds_pred = blk.dres;
            for (int i = 0; i < m; ++i) blk.ds_pred -= dy[i] * prob.a_blocks[k][i];
            Eigen::MatrixXd dx = -blk.x - blk.x * blk.ds_pred * blk.sinv;
            blk.dx_pred = 0.5 * (dx + dx.transpose());
            alpha_p = std::min(alpha_p, max_step(blk.x, blk.dx_pred));
            alpha_d = std::min(alpha_d, max_step(blk.s, blk.ds_pred));
        }

        double gap_aff = 0.0;
        for (auto& blk : blocks)
            gap_aff += inner(blk.x + alpha_p * blk.dx_pred, blk.s + alpha_d * blk.ds_pred);
        gap_aff = std::max(gap_aff, 0.0);
        double beta = std::pow(gap_aff / gap, 3.0);
        // After a stall, bias toward pure centering to regain step room.
        beta = std::clamp(beta, stalled > 0 ? 0.5 : 1e-4, 1.0);

        // Corrector with the second-order complementarity term.
        schur_rhs = prob.b - beta * mu * s_vec + d_vec;
        for (int k = 0; k < nblocks; ++k) {
            auto& blk = blocks[k];
            blk.dx = blk.dx_pred * blk.ds_pred * blk.sinv;  // reused in the dx update below
            for (int i = 0; i < m; ++i) schur_rhs[i] += inner(prob.a_blocks[k][i], blk.dx);
        }
        dy = schur_solve(schur_rhs);

        alpha_p = std::numeric_limits<double>::infinity();
        alpha_d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < nblocks; ++k) {
            auto& blk = blocks[k];
            blk.ds = blk.dres;
            for (int i = 0; i < m; ++i) blk.ds -= dy[i] * prob.a_blocks[k][i];
            Eigen::MatrixXd dx =
                beta * mu * blk.sinv - blk.x - blk.x * blk.ds * blk.sinv - blk.dx;
            blk.dx = 0.5 * (dx + dx.transpose());
            alpha_p = std::min(alpha_p, max_step(blk.x, blk.dx));
            alpha_d = std::min(alpha_d, max_step(blk.s, blk.ds));
        }
        // Expand toward the full Mehrotra fraction only when the affine step
        // already reached deep into the cone.
        const double fraction = std::min(
            opts.step_fraction, 0.9 + 0.08 * std::min({alpha_p, alpha_d, 1.0}));
        alpha_p = std::min(1.0, fraction * alpha_p);
        alpha_d = std::min(1.0, fraction * alpha_d);
        sol.log.back().step_primal = alpha_p;
        sol.log.back().step_dual = alpha_d;

        if (alpha_p < 1e-8 && alpha_d < 1e-8) {
            if (++stalled >= 5) return finalize(best, SdpStatus::NumericalFailure, iter);
        } else {
            stalled = 0;
        }

        for (int k = 0; k < nblocks; ++k) {
            auto& blk = blocks[k];
            blk.x += alpha_p * blk.dx;
            blk.s += alpha_d * blk.ds;
            blk.x = 0.5 * (blk.x + blk.x.transpose()).eval();
            blk.s = 0.5 * (blk.s + blk.s.transpose()).eval();
        }
        y += alpha_d * dy;

        if (opts.verbose) {
            std::printf("%s", sol.log_text().c_str());
        }
    }

    return finalize(best, SdpStatus::MaxIterations, opts.max_iterations);
}

}  // namespace sosbound
