#include "sosbound/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include "sosbound/hbalance.hpp"
#include "sosbound/simulate.hpp"

namespace sosbound {

namespace {

int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SOSBOUND_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 1;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void fill_hb_columns(const ProblemFile& pf, double omega, SweepRow& row) {
    const auto param = [&](const char* name, double fallback) {
        auto it = pf.params.find(name);
        return it == pf.params.end() ? fallback : it->second;
    };
    if (pf.model == "duffing") {
        DuffingHb hb{param("delta", 0.1), param("alpha", 1.0), param("beta", 0.04),
                     param("F", 1.0)};
        row.hb_r = duffing_response(hb, omega).amplitudes;
    } else if (pf.model == "pendulum") {
        PendulumHb hb{param("gamma", 0.1), param("F", 0.1),
                      param("hb_about_pi", 0.0) != 0.0};
        const FrequencyResponsePoint point = pendulum_response(hb, omega);
        row.hb_r = point.amplitudes;
        row.hb_e = hb_mean_energy(point, hb);
    }
}

std::vector<std::vector<double>> spot_check_ics(const ProblemFile& pf, const DynSystem& sys,
                                                int count, std::mt19937& rng) {
    std::vector<std::vector<double>> ics;
    if (count <= 0 || pf.model.empty()) return ics;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double f_amp = pf.params.count("F") ? pf.params.at("F") : 0.0;
    for (int i = 0; i < count; ++i) {
        std::vector<double> x0(sys.dimension(), 0.0);
        if (pf.model == "duffing") {
            x0[sys.var_index("x")] = 2.0 * unit(rng);
            x0[sys.var_index("y")] = 2.0 * unit(rng);
            x0[sys.var_index("z1")] = 0.0;
            x0[sys.var_index("z2")] = f_amp;
        } else {
            const double theta = M_PI * unit(rng);
            x0[sys.var_index("phi")] = unit(rng);
            x0[sys.var_index("psi1")] = std::sin(theta);
            x0[sys.var_index("psi2")] = std::cos(theta);
            x0[sys.var_index("z1")] = f_amp;
            x0[sys.var_index("z2")] = 0.0;
        }
        ics.push_back(std::move(x0));
    }
    return ics;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ProblemFile& pf, const SweepOptions& opts) {
    if (!pf.sweep) throw std::invalid_argument("run_sweep: problem file has no [sweep] section");
    const SweepSpec& spec = *pf.sweep;
    if (!(spec.step > 0.0)) throw std::invalid_argument("run_sweep: sweep step must be > 0");

    std::vector<double> grid;
    for (double w = spec.from; w <= spec.to + 0.5 * spec.step; w += spec.step)
        grid.push_back(w);
    std::vector<int> degrees = !opts.degrees.empty() ? opts.degrees
                               : !spec.degrees.empty() ? spec.degrees
                                                       : std::vector<int>{pf.v_degree};

    struct Task {
        double omega;
        int degree;
    };
    std::vector<Task> tasks;
    for (double w : grid)
        for (int d : degrees) tasks.push_back({w, d});
    std::vector<SweepRow> rows(tasks.size());

    // Spot-check initial conditions are drawn up front so the row content is
    // independent of worker scheduling.
    std::mt19937 rng(opts.seed);
    std::vector<std::vector<std::vector<double>>> ics(tasks.size());
    if (opts.simulate_checks > 0) {
        for (size_t t = 0; t < tasks.size(); ++t) {
            ProblemFile point = pf;
            point.params[spec.param] = tasks[t].omega;
            ics[t] = spot_check_ics(point, point.system(), opts.simulate_checks, rng);
        }
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            SweepRow& row = rows[t];
            row.omega = tasks[t].omega;
            row.degree = tasks[t].degree;
            ProblemFile point = pf;
            point.params[spec.param] = row.omega;
            try {
                fill_hb_columns(point, row.omega, row);
                BoundQuery q = point.query();
                q.v_degree = row.degree;
                q.direction = BoundDirection::Upper;
                const BoundResult up = bound(q);
                q.direction = BoundDirection::Lower;
                const BoundResult lo = bound(q);
                if (up.ok()) row.upper = up.bound;
                if (lo.ok()) row.lower = lo.bound;
                if (!up.ok() || !lo.ok())
                    row.status = "solver:" + to_string(!up.ok() ? up.status : lo.status);
                const DynSystem sys = point.system();
                const Polynomial phi = point.observable();
                for (const auto& x0 : ics[t]) {
                    const double period = 2.0 * M_PI / row.omega;
                    row.sim_averages.push_back(
                        time_average(sys, phi, x0, 200.0, 400.0, 1e-3, period).value);
                }
            } catch (const std::exception& e) {
                row.status = std::string("error:") + e.what();
            }
        }
    };
    const int jobs = std::min<int>(resolve_jobs(opts.jobs), static_cast<int>(tasks.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::string sweep_rows_to_csv(const ProblemFile& pf, const SweepOptions& opts,
                              const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "# sosbound sweep\n";
    if (pf.sweep) {
        os << "# param=" << pf.sweep->param << " from=" << fmt(pf.sweep->from)
           << " to=" << fmt(pf.sweep->to) << " step=" << fmt(pf.sweep->step) << "\n";
    }
    os << "# degrees=";
    {
        std::vector<int> degrees = !opts.degrees.empty() ? opts.degrees
                                   : (pf.sweep && !pf.sweep->degrees.empty())
                                       ? pf.sweep->degrees
                                       : std::vector<int>{pf.v_degree};
        for (size_t i = 0; i < degrees.size(); ++i) os << (i ? "," : "") << degrees[i];
    }
    os << "\n# gap_tol=" << fmt(pf.solver.gap_tol) << " feas_tol=" << fmt(pf.solver.feas_tol)
       << " max_iter=" << pf.solver.max_iterations << "\n";
    os << "# seed=" << opts.seed << "\n";
    if (!pf.model.empty()) os << "# model=" << pf.model << "\n";
    os << "omega,lower,upper,gap,hb_R_1,hb_R_2,hb_R_3,hb_E_1,hb_E_2,hb_E_3,status,degree\n";

    auto opt_field = [&](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    auto vec_field = [&](const std::vector<double>& v, size_t i) {
        return i < v.size() ? fmt(v[i]) : std::string();
    };
    for (const auto& row : rows) {
        std::string gap;
        if (row.lower && row.upper) gap = fmt(*row.upper - *row.lower);
        os << fmt(row.omega) << "," << opt_field(row.lower) << "," << opt_field(row.upper) << ","
           << gap;
        for (size_t i = 0; i < 3; ++i) os << "," << vec_field(row.hb_r, i);
        for (size_t i = 0; i < 3; ++i) os << "," << vec_field(row.hb_e, i);
        os << "," << row.status << "," << row.degree << "\n";
        for (size_t i = 0; i < row.sim_averages.size(); ++i)
            os << "# sim omega=" << fmt(row.omega) << " ic=" << i
               << " avg=" << fmt(row.sim_averages[i]) << "\n";
    }
    os << "# status: complete rows=" << rows.size() << "\n";
    return os.str();
}

std::string run_sweep_csv(const ProblemFile& pf, const SweepOptions& opts) {
    return sweep_rows_to_csv(pf, opts, run_sweep(pf, opts));
}

}  // namespace sosbound
