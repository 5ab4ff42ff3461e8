#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sosbound/problem_file.hpp"

namespace sosbound {

struct SweepOptions {
    /// Concurrent bound solves; 0 = SOSBOUND_JOBS environment variable or 1.
    int jobs = 0;
    /// Degree ladder; empty = the problem file's sweep degrees or v degree.
    std::vector<int> degrees;
    /// Seed for the optional simulated spot checks (recorded in the header).
    unsigned seed = 12345;
    /// Random initial conditions per sweep point whose time averages are
    /// emitted as comment lines (0 = off). Needs a registered model.
    int simulate_checks = 0;
};

struct SweepRow {
    double omega = 0.0;
    int degree = 0;
    std::optional<double> lower;
    std::optional<double> upper;
    std::vector<double> hb_r;
    std::vector<double> hb_e;
    std::string status = "ok";
    std::vector<double> sim_averages;
};

/// All sweep rows, ordered by omega then degree (independent of the worker
/// interleaving).
std::vector<SweepRow> run_sweep(const ProblemFile& pf, const SweepOptions& opts = {});

/// CSV with the fixed schema
///   omega, lower, upper, gap, hb_R_1..3, hb_E_1..3, status, degree
/// plus metadata comment lines and a trailing status comment. Missing values
/// are empty fields.
std::string run_sweep_csv(const ProblemFile& pf, const SweepOptions& opts = {});

std::string sweep_rows_to_csv(const ProblemFile& pf, const SweepOptions& opts,
                              const std::vector<SweepRow>& rows);

}  // namespace sosbound
