// Command-line surface: bound solves, frequency sweeps, harmonic balance
// tables, trajectory averaging and SDPA export, all driven by problem files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sosbound/bound.hpp"
#include "sosbound/errors.hpp"
#include "sosbound/hbalance.hpp"
#include "sosbound/problem_file.hpp"
#include "sosbound/sdpa_io.hpp"
#include "sosbound/simulate.hpp"
#include "sosbound/sweep.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitDivergence = 4;

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << content;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

int run_bound(const std::string& path, const std::string& direction, int degree, bool escalate_flag,
              bool dump_v, const std::string& out_path) {
    sosbound::ProblemFile pf = sosbound::load_problem(path);
    sosbound::BoundQuery q = pf.query();
    if (direction == "upper") q.direction = sosbound::BoundDirection::Upper;
    else if (direction == "lower") q.direction = sosbound::BoundDirection::Lower;
    else if (!direction.empty()) throw CLI::ValidationError("--direction must be upper or lower");
    if (degree > 0) q.v_degree = degree;

    const sosbound::BoundResult r =
        escalate_flag ? sosbound::escalate(q) : sosbound::bound(q);

    std::ostringstream os;
    char line[64];
    std::snprintf(line, sizeof(line), "U=%.6f\n", r.bound);
    os << line;
    os << "direction=" << (r.direction == sosbound::BoundDirection::Upper ? "upper" : "lower")
       << " degree=" << r.v_degree << " bound=" << fmt(r.bound) << " gap=" << fmt(r.sdp_gap)
       << " status=" << sosbound::to_string(r.status) << "\n";
    for (const auto& [d, b] : r.escalation_trace)
        os << "# escalation degree=" << d << " bound=" << fmt(b) << "\n";
    if (dump_v) {
        os << "# V = " << r.v.to_string(pf.variables) << "\n";
        for (size_t i = 0; i < r.multipliers.size(); ++i)
            os << "# multiplier[" << i << "] = " << r.multipliers[i].to_string(pf.variables)
               << "\n";
    }
    write_output(out_path, os.str());
    return r.ok() ? 0 : kExitSolver;
}

int run_hb(const std::string& model, const std::string& params_csv, double omega, double from,
           double to, double step, bool about_pi, const std::string& out_path) {
    std::vector<double> grid;
    if (omega > 0.0) {
        grid.push_back(omega);
    } else {
        if (!(step > 0.0) || !(to >= from) || from <= 0.0)
            throw CLI::ValidationError("hb needs --omega or a valid --from/--to/--step range");
        for (double w = from; w <= to + 0.5 * step; w += step) grid.push_back(w);
    }
    const std::vector<double> p = parse_csv_doubles(params_csv);
    std::ostringstream os;
    os << "omega,branch,R,mean_energy,regime\n";
    for (double w : grid) {
        sosbound::FrequencyResponsePoint point;
        std::vector<double> energies;
        if (model == "duffing") {
            if (p.size() != 4)
                throw CLI::ValidationError("--params for duffing: delta,alpha,beta,F");
            point = sosbound::duffing_response({p[0], p[1], p[2], p[3]}, w);
        } else if (model == "pendulum") {
            if (p.size() != 2) throw CLI::ValidationError("--params for pendulum: gamma,F");
            const sosbound::PendulumHb hb{p[0], p[1], about_pi};
            point = sosbound::pendulum_response(hb, w);
            energies = sosbound::hb_mean_energy(point, hb);
        } else {
            throw CLI::ValidationError("--model must be duffing or pendulum");
        }
        const char* regime =
            point.regime == sosbound::ResponseRegime::MultiValued ? "multi" : "single";
        for (size_t i = 0; i < point.amplitudes.size(); ++i) {
            os << fmt(w) << "," << i + 1 << "," << fmt(point.amplitudes[i]) << ","
               << (i < energies.size() ? fmt(energies[i]) : std::string()) << "," << regime
               << "\n";
        }
    }
    write_output(out_path, os.str());
    return 0;
}

int run_simulate(const std::string& path, const std::string& x0_csv, int random_count,
                 unsigned seed, const std::string& box, double t_transient, double t_average,
                 double dt, bool dump, const std::string& out_path) {
    sosbound::ProblemFile pf = sosbound::load_problem(path);
    const sosbound::DynSystem sys = pf.system();
    const sosbound::Polynomial phi = pf.observable();
    const int n = sys.dimension();

    std::vector<std::vector<double>> ics;
    if (!x0_csv.empty()) {
        std::vector<double> x0 = parse_csv_doubles(x0_csv);
        if (static_cast<int>(x0.size()) != n)
            throw CLI::ValidationError("--x0 needs one value per variable");
        ics.push_back(std::move(x0));
    } else if (random_count > 0) {
        std::vector<std::pair<double, double>> ranges;
        if (box.empty()) {
            ranges.assign(n, {-1.0, 1.0});
        } else {
            std::istringstream is(box);
            std::string tok;
            while (std::getline(is, tok, ',')) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos)
                    throw CLI::ValidationError("--box must look like lo:hi[,lo:hi...]");
                ranges.emplace_back(std::stod(tok.substr(0, colon)),
                                    std::stod(tok.substr(colon + 1)));
            }
            if (ranges.size() == 1) ranges.assign(n, ranges[0]);
            if (static_cast<int>(ranges.size()) != n)
                throw CLI::ValidationError("--box needs one range or one per variable");
        }
        std::mt19937 rng(seed);
        for (int i = 0; i < random_count; ++i) {
            std::vector<double> x0(n);
            for (int k = 0; k < n; ++k) {
                std::uniform_real_distribution<double> u(ranges[k].first, ranges[k].second);
                x0[k] = u(rng);
            }
            ics.push_back(std::move(x0));
        }
    } else {
        throw CLI::ValidationError("simulate needs --x0 or --random N");
    }

    std::ostringstream os;
    os << "# seed=" << seed << " t_transient=" << fmt(t_transient)
       << " t_average=" << fmt(t_average) << " dt=" << fmt(dt) << "\n";
    if (dump) {
        os << "t";
        for (const auto& name : sys.var_names) os << "," << name;
        os << "\n";
        const sosbound::Trajectory traj =
            sosbound::integrate(sys, ics.front(), t_transient + t_average, dt);
        for (size_t i = 0; i < traj.times.size(); ++i) {
            os << fmt(traj.times[i]);
            for (double v : traj.states[i]) os << "," << fmt(v);
            os << "\n";
        }
    } else {
        os << "ic,average\n";
        for (size_t i = 0; i < ics.size(); ++i) {
            const auto avg =
                sosbound::time_average(sys, phi, ics[i], t_transient, t_average, dt);
            os << i << "," << fmt(avg.value) << "\n";
        }
    }
    write_output(out_path, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rigorous bounds on long-time averages of polynomial ODE observables"};
    app.require_subcommand(1);

    // bound
    auto* bound_cmd = app.add_subcommand("bound", "Solve the bound program for a problem file");
    std::string bound_file, bound_direction, bound_out;
    int bound_degree = 0;
    bool bound_escalate = false, bound_dump_v = false;
    bound_cmd->add_option("file", bound_file, "problem file")->required();
    bound_cmd->add_option("--direction", bound_direction, "upper|lower");
    bound_cmd->add_option("--degree", bound_degree, "auxiliary function degree");
    bound_cmd->add_flag("--escalate", bound_escalate, "escalate degree until sharp");
    bound_cmd->add_flag("--dump-v", bound_dump_v, "print recovered V and multipliers");
    bound_cmd->add_option("--out", bound_out, "write output to file");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Frequency sweep of bounds (CSV)");
    std::string sweep_file, sweep_param, sweep_degrees, sweep_out;
    double sweep_from = 0.0, sweep_to = 0.0, sweep_step = 0.0;
    int sweep_jobs = 0, sweep_sim = 0;
    unsigned sweep_seed = 12345;
    sweep_cmd->add_option("file", sweep_file, "problem file")->required();
    sweep_cmd->add_option("--param", sweep_param, "sweep parameter name");
    sweep_cmd->add_option("--from", sweep_from, "sweep start");
    sweep_cmd->add_option("--to", sweep_to, "sweep end");
    sweep_cmd->add_option("--step", sweep_step, "sweep step");
    sweep_cmd->add_option("--degrees", sweep_degrees, "comma-separated degree ladder");
    sweep_cmd->add_option("--jobs", sweep_jobs, "concurrent solves (default SOSBOUND_JOBS or 1)");
    sweep_cmd->add_option("--seed", sweep_seed, "seed for simulated spot checks");
    sweep_cmd->add_option("--sim", sweep_sim, "simulated spot checks per point");
    sweep_cmd->add_option("--out", sweep_out, "write CSV to file");

    // hb
    auto* hb_cmd = app.add_subcommand("hb", "Harmonic-balance frequency response (CSV)");
    std::string hb_model, hb_params, hb_out;
    double hb_omega = 0.0, hb_from = 0.0, hb_to = 0.0, hb_step = 0.0;
    bool hb_about_pi = false;
    hb_cmd->add_option("--model", hb_model, "duffing|pendulum")->required();
    hb_cmd->add_option("--params", hb_params, "duffing: delta,alpha,beta,F; pendulum: gamma,F")
        ->required();
    hb_cmd->add_option("--omega", hb_omega, "single frequency");
    hb_cmd->add_option("--from", hb_from, "sweep start");
    hb_cmd->add_option("--to", hb_to, "sweep end");
    hb_cmd->add_option("--step", hb_step, "sweep step");
    hb_cmd->add_flag("--about-pi", hb_about_pi, "expand about the inverted position");
    hb_cmd->add_option("--out", hb_out, "write CSV to file");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Trajectory time averages (CSV)");
    std::string sim_file, sim_x0, sim_box, sim_out;
    int sim_random = 0;
    unsigned sim_seed = 12345;
    double sim_transient = 100.0, sim_average = 400.0, sim_dt = 1e-3;
    bool sim_dump = false;
    sim_cmd->add_option("file", sim_file, "problem file")->required();
    sim_cmd->add_option("--x0", sim_x0, "comma-separated initial state");
    sim_cmd->add_option("--random", sim_random, "number of random initial conditions");
    sim_cmd->add_option("--seed", sim_seed, "random seed (recorded in output)");
    sim_cmd->add_option("--box", sim_box, "sampling box lo:hi[,lo:hi...]");
    sim_cmd->add_option("--t-transient", sim_transient, "discarded transient time");
    sim_cmd->add_option("--t-average", sim_average, "averaging window");
    sim_cmd->add_option("--dt", sim_dt, "integrator step");
    sim_cmd->add_flag("--dump", sim_dump, "dump the trajectory instead of averaging");
    sim_cmd->add_option("--out", sim_out, "write CSV to file");

    // export-sdpa
    auto* export_cmd = app.add_subcommand("export-sdpa", "Export the bound program as .dat-s");
    std::string export_file, export_out;
    int export_degree = 0;
    export_cmd->add_option("file", export_file, "problem file")->required();
    export_cmd->add_option("--out", export_out, "output path")->required();
    export_cmd->add_option("--degree", export_degree, "override the V degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (bound_cmd->parsed())
            return run_bound(bound_file, bound_direction, bound_degree, bound_escalate,
                             bound_dump_v, bound_out);
        if (sweep_cmd->parsed()) {
            sosbound::ProblemFile pf = sosbound::load_problem(sweep_file);
            if (!sweep_param.empty() || sweep_step > 0.0) {
                sosbound::SweepSpec spec = pf.sweep.value_or(sosbound::SweepSpec{});
                if (!sweep_param.empty()) spec.param = sweep_param;
                if (sweep_step > 0.0) {
                    spec.from = sweep_from;
                    spec.to = sweep_to;
                    spec.step = sweep_step;
                }
                pf.sweep = spec;
            }
            sosbound::SweepOptions opts;
            opts.jobs = sweep_jobs;
            opts.seed = sweep_seed;
            opts.simulate_checks = sweep_sim;
            if (!sweep_degrees.empty())
                for (double d : parse_csv_doubles(sweep_degrees))
                    opts.degrees.push_back(static_cast<int>(d));
            write_output(sweep_out, sosbound::run_sweep_csv(pf, opts));
            return 0;
        }
        if (hb_cmd->parsed())
            return run_hb(hb_model, hb_params, hb_omega, hb_from, hb_to, hb_step, hb_about_pi,
                          hb_out);
        if (sim_cmd->parsed())
            return run_simulate(sim_file, sim_x0, sim_random, sim_seed, sim_box, sim_transient,
                                sim_average, sim_dt, sim_dump, sim_out);
        if (export_cmd->parsed()) {
            sosbound::ProblemFile pf = sosbound::load_problem(export_file);
            sosbound::BoundQuery q = pf.query();
            if (export_degree > 0) q.v_degree = export_degree;
            const sosbound::SosAssembly assembly =
                sosbound::assemble_sdp(sosbound::build_program(q));
            sosbound::export_sdpa(assembly.sdp, export_out);
            return 0;
        }
    } catch (const sosbound::DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const sosbound::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const sosbound::MissingSectionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitUsage;
}
