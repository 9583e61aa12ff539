#include "hrvtraj/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <ostream>

#include "hrvtraj/errors.hpp"
#include "hrvtraj/io.hpp"

namespace hrvtraj::cli {
namespace fs = std::filesystem;
using io::json;

namespace {

struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    json parameters = json::object();
    json inputs = json::array();
    json outputs = json::array();

    void input(const fs::path& p) { inputs.push_back({{"path", p.string()}, {"fnv1a64", io::file_hash(p)}}); }

    json to_json() const {
        return {{"command", command},   {"tool_version", io::kToolVersion}, {"seed", seed},
                {"parameters", parameters}, {"inputs", inputs},             {"outputs", outputs}};
    }
};

void write_json(const fs::path& p, const json& doc) { io::write_text(p, doc.dump(2) + "\n"); }

struct OptimizeArgs {
    std::string waypoints, limits, out_dir = ".";
    std::size_t population = 90, generations = 200, ladder_size = 15, threads = 1;
    std::uint64_t seed = 1;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
    const auto problem = io::load_problem(a.waypoints, a.limits);
    NsgaOptions opt;
    opt.population = a.population;
    opt.generations = a.generations;
    opt.seed = a.seed;
    opt.threads = a.threads;
    if (opt.population < 4 || opt.population % 2 != 0) throw InputError("--population must be even and >= 4");
    if (a.ladder_size == 0) throw InputError("--ladder-size must be positive");

    const auto result = nsga2(problem, opt);
    const auto ladder = downsample(result.front, a.ladder_size);
    const auto hash = io::problem_hash(problem);

    const fs::path dir(a.out_dir);
    write_json(dir / "front.json", io::front_to_json(result, hash, opt));
    write_json(dir / "ladder.json", io::ladder_to_json(ladder, hash, a.seed, problem.joints()));

    Manifest m;
    m.command = "optimize";
    m.seed = a.seed;
    m.parameters = {{"population", a.population}, {"generations", a.generations}, {"ladder_size", a.ladder_size}};
    m.input(a.waypoints);
    m.input(a.limits);
    m.outputs = {"front.json", "ladder.json"};
    write_json(dir / "manifest.json", m.to_json());

    out << "front: " << result.front.size() << " solutions, ladder: " << ladder.size() << " entries\n";
    if (ladder.undersized) {
        out << "warning: front holds only " << ladder.size() << " unique solutions (requested " << a.ladder_size
            << ")\n";
    }
    return kOk;
}

json read_json_file(const fs::path& p, const std::string& what) {
    try {
        return json::parse(io::read_text(p));
    } catch (const json::exception& e) {
        throw InputError(what + ": invalid JSON: " + e.what());
    }
}

struct PlanArgs {
    std::string waypoints, limits, ladder, out = "trajectory.csv";
    int index = 0;
    double rate = 500.0;
};

int cmd_plan(const PlanArgs& a, std::ostream& out) {
    const auto problem = a.limits.empty() ? io::load_waypoints_only(a.waypoints) : io::load_problem(a.waypoints, a.limits);
    const auto doc = read_json_file(a.ladder, "ladder");
    const auto ladder = io::ladder_from_json(doc);
    if (!a.limits.empty() && doc.contains("problem_hash") && doc.at("problem_hash") != io::problem_hash(problem)) {
        throw InputError("ladder was optimized for a different problem (problem_hash mismatch)");
    }
    if (a.index < 1 || static_cast<std::size_t>(a.index) > ladder.size()) {
        throw InputError("--index " + std::to_string(a.index) + " outside ladder range [1, " +
                         std::to_string(ladder.size()) + "]");
    }
    if (!(a.rate > 0.0)) throw InputError("--rate must be positive");
    const auto& entry = ladder.entries[static_cast<std::size_t>(a.index - 1)];
    if (entry.h.size() != problem.interval_count()) {
        throw InputError("ladder entry has " + std::to_string(entry.h.size()) + " intervals, waypoints need " +
                         std::to_string(problem.interval_count()));
    }
    const auto traj = solve_trajectory(entry.h, problem);
    const auto rows = sample_trajectory(traj.curves, a.rate);
    io::write_text(a.out, io::trajectory_csv(rows, problem.joint_names));

    Manifest m;
    m.command = "plan";
    m.parameters = {{"index", a.index}, {"rate", a.rate}};
    m.input(a.waypoints);
    if (!a.limits.empty()) m.input(a.limits);
    m.input(a.ladder);
    m.outputs = {fs::path(a.out).filename().string()};
    write_json(fs::path(a.out).string() + ".manifest.json", m.to_json());
    out << "wrote " << rows.size() << " rows, t_f=" << traj.duration() << " s\n";
    return kOk;
}

struct HrvFlags {
    double window = 30.0, delta_rs = 0.02, delta_sr = 0.01, rr_rest = 0.80;
    double rr_stress = -1.0, sigma_rest = 0.14, sigma_stress = 0.06;

    void add(CLI::App& app) {
        app.add_option("--window", window, "decision window length (s)");
        app.add_option("--delta-rs", delta_rs, "rest-to-stress threshold (s)");
        app.add_option("--delta-sr", delta_sr, "stress-to-rest threshold (s)");
        app.add_option("--rr-rest", rr_rest, "resting mean RR (s)");
        app.add_option("--rr-stress", rr_stress, "stress reference RR (s); default rr-rest - 0.10");
        app.add_option("--sigma-rest", sigma_rest, "rest spread (s)");
        app.add_option("--sigma-stress", sigma_stress, "stress spread (s)");
    }

    HrvParams params() const {
        HrvParams p = HrvParams::for_rest(rr_rest);
        if (rr_stress > 0.0) p.rr_stress = rr_stress;
        p.window = window;
        p.delta_rest_to_stress = delta_rs;
        p.delta_stress_to_rest = delta_sr;
        p.sigma_rest = sigma_rest;
        p.sigma_stress = sigma_stress;
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        return p;
    }
};

struct AdaptArgs {
    std::string rr, ladder, out = "timeline.csv";
    std::size_t ladder_size = 0;
    HrvFlags hrv;
};

int cmd_adapt(const AdaptArgs& a, std::ostream& out) {
    const auto stream = io::read_rr_csv(a.rr);
    if (stream.empty()) throw InputError("rr: stream holds no samples");
    std::size_t n = a.ladder_size;
    if (!a.ladder.empty()) n = io::ladder_from_json(read_json_file(a.ladder, "ladder")).size();
    if (n == 0) n = 15;
    const auto params = a.hrv.params();
    const auto rows = adapt_stream(stream, params, n);
    io::write_text(a.out, io::timeline_csv(rows));

    Manifest m;
    m.command = "adapt";
    m.parameters = io::hrv_to_json(params);
    m.parameters["ladder_size"] = n;
    m.input(a.rr);
    if (!a.ladder.empty()) m.input(a.ladder);
    m.outputs = {fs::path(a.out).filename().string()};
    write_json(fs::path(a.out).string() + ".manifest.json", m.to_json());
    out << "wrote " << rows.size() << " windows\n";
    return kOk;
}

struct SimulateArgs {
    std::string config, out_dir = ".";
    int pin_index = 0;
};

void write_session(const fs::path& dir, const SessionReport& report, const SessionConfig& config,
                   const SimulateArgs& a) {
    write_json(dir / "report.json", io::report_to_json(report, config));
    io::write_text(dir / "timeline.csv", io::timeline_csv(report.timeline));
    io::write_text(dir / "cycles.csv", io::cycles_csv(report.cycle_table));
    Manifest m;
    m.command = "simulate";
    m.seed = config.seed;
    m.parameters = {{"pin_index", config.pinned_index ? json(*config.pinned_index) : json(nullptr)},
                    {"duration_s", config.duration}};
    m.input(a.config);
    m.outputs = {"report.json", "timeline.csv", "cycles.csv"};
    write_json(dir / "manifest.json", m.to_json());
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    auto config = io::read_session_config(a.config);
    if (a.pin_index != 0) config.pinned_index = a.pin_index;
    const fs::path dir(a.out_dir);
    try {
        const auto report = run_session(config);
        write_session(dir, report, config, a);
        out << "cycles: " << report.cycles << ", production rate: " << report.stats.production_rate
            << " boxes/min\n";
        return kOk;
    } catch (const TruncatedSession& e) {
        write_session(dir, e.partial(), config, a);
        err << "error: " << e.what() << " (partial report written)\n";
        return kComputationError;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"B-spline time/jerk trajectory optimization with HRV-driven solution selection", "hrvtraj"};
    app.require_subcommand(1);
    app.set_version_flag("--version", io::kToolVersion);

    OptimizeArgs opt;
    auto* optimize = app.add_subcommand("optimize", "optimize interval vectors and downsample the Pareto front");
    optimize->add_option("--waypoints", opt.waypoints, "waypoints CSV or JSON")->required();
    optimize->add_option("--limits", opt.limits, "limits JSON")->required();
    optimize->add_option("--population", opt.population, "NSGA-II population size");
    optimize->add_option("--generations", opt.generations, "NSGA-II generations");
    optimize->add_option("--seed", opt.seed, "random seed");
    optimize->add_option("--ladder-size", opt.ladder_size, "number of downsampled solutions");
    optimize->add_option("--threads", opt.threads, "evaluation threads");
    optimize->add_option("--out-dir", opt.out_dir, "output directory");

    PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "sample the trajectory of one ladder entry");
    plan_cmd->add_option("--waypoints", plan.waypoints, "waypoints CSV or JSON")->required();
    plan_cmd->add_option("--limits", plan.limits, "limits JSON (boundary conditions, hash check)");
    plan_cmd->add_option("--ladder", plan.ladder, "ladder JSON")->required();
    plan_cmd->add_option("--index", plan.index, "one-based ladder index")->required();
    plan_cmd->add_option("--rate", plan.rate, "sampling rate (Hz)");
    plan_cmd->add_option("--out", plan.out, "output CSV");

    AdaptArgs adapt;
    auto* adapt_cmd = app.add_subcommand("adapt", "replay the decision maker over a recorded RR stream");
    adapt_cmd->add_option("--rr", adapt.rr, "RR CSV (timestamp_s, rr_s)")->required();
    adapt_cmd->add_option("--ladder", adapt.ladder, "ladder JSON (sets the ladder size)");
    adapt_cmd->add_option("--ladder-size", adapt.ladder_size, "ladder size when no ladder is given");
    adapt_cmd->add_option("--out", adapt.out, "output timeline CSV");
    adapt.hrv.add(*adapt_cmd);

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "run a closed-loop session");
    sim_cmd->add_option("--config", sim.config, "session config JSON")->required();
    sim_cmd->add_option("--pin-index", sim.pin_index, "hold this one-based index on every path");
    sim_cmd->add_option("--out-dir", sim.out_dir, "output directory");

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << io::kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (*optimize) return cmd_optimize(opt, out);
        if (*plan_cmd) return cmd_plan(plan, out);
        if (*adapt_cmd) return cmd_adapt(adapt, out);
        if (*sim_cmd) return cmd_simulate(sim, out, err);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const DegenerateIntervalError& e) {
        err << "degenerate computation: " << e.what() << "\n";
        return kComputationError;
    } catch (const OptimizationFailed& e) {
        err << "optimization failed: " << e.what() << "\n";
        return kComputationError;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace hrvtraj::cli
