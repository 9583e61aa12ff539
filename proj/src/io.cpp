#include "hrvtraj/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hrvtraj/errors.hpp"

namespace hrvtraj::io {
namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_hash(const fs::path& path) { return fnv1a_hex(read_text(path)); }

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

// Data rows of a CSV, with an optional header returned separately.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> line_numbers;
};

CsvTable parse_csv(const std::string& text, const std::string& what) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_csv(line);
        std::vector<double> row;
        bool numeric = true;
        std::string bad_cell;
        for (const auto& c : cells) {
            double v;
            if (!parse_number(c, v)) {
                numeric = false;
                bad_cell = c;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                t.header = cells;
                first = false;
                continue;
            }
            throw InputError(what + ": non-numeric value '" + bad_cell + "' on line " + std::to_string(lineno));
        }
        first = false;
        t.rows.push_back(std::move(row));
        t.line_numbers.push_back(lineno);
    }
    return t;
}

const json& require(const json& doc, const char* key, const std::string& where) {
    if (!doc.is_object() || !doc.contains(key)) throw InputError(where + ": missing field '" + key + "'");
    return doc.at(key);
}

double number_field(const json& doc, const char* key, const std::string& where) {
    const auto& v = require(doc, key, where);
    if (!v.is_number()) throw InputError(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

double number_or(const json& doc, const char* key, double fallback, const std::string& where) {
    if (!doc.is_object() || !doc.contains(key)) return fallback;
    return number_field(doc, key, where);
}

std::vector<double> number_array(const json& v, const std::string& where) {
    if (!v.is_array()) throw InputError(where + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw InputError(where + " must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<double> joint_array(const json& doc, const char* key, std::size_t joints, const std::string& where) {
    auto v = number_array(require(doc, key, where), where + "." + key);
    if (v.size() != joints) {
        throw InputError(where + "." + key + " has " + std::to_string(v.size()) + " entries, expected " +
                         std::to_string(joints));
    }
    return v;
}

}  // namespace

WaypointTable parse_waypoints(const std::string& text, bool as_json) {
    WaypointTable table;
    std::vector<std::vector<double>> rows;
    if (as_json) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw InputError(std::string("waypoints: invalid JSON: ") + e.what());
        }
        const auto& wp = require(doc, "waypoints", "waypoints");
        if (!wp.is_array()) throw InputError("waypoints: field 'waypoints' must be an array of rows");
        for (std::size_t i = 0; i < wp.size(); ++i) rows.push_back(number_array(wp[i], "waypoints[" + std::to_string(i) + "]"));
        if (doc.contains("joint_names")) {
            for (const auto& n : doc.at("joint_names")) {
                if (!n.is_string()) throw InputError("waypoints: 'joint_names' must hold strings");
                table.joint_names.push_back(n.get<std::string>());
            }
        }
    } else {
        auto csv = parse_csv(text, "waypoints");
        rows = std::move(csv.rows);
        table.joint_names = std::move(csv.header);
    }
    if (rows.empty()) throw InputError("waypoints: no waypoint rows");
    const std::size_t d = rows.front().size();
    if (d == 0) throw InputError("waypoints: rows have no joint columns");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) {
            throw InputError("waypoints: row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                             " columns, expected " + std::to_string(d));
        }
    }
    if (rows.size() < 2) throw InputError("waypoints: at least two waypoints are required");
    if (!table.joint_names.empty() && table.joint_names.size() != d) {
        throw InputError("waypoints: joint name count does not match column count");
    }
    if (table.joint_names.empty()) {
        for (std::size_t j = 0; j < d; ++j) table.joint_names.push_back("j" + std::to_string(j + 1));
    }
    table.waypoints.assign(d, std::vector<double>(rows.size()));
    for (std::size_t l = 0; l < rows.size(); ++l)
        for (std::size_t j = 0; j < d; ++j) table.waypoints[j][l] = rows[l][j];
    return table;
}

WaypointTable read_waypoints(const fs::path& path) {
    const auto text = read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool as_json = path.extension() == ".json" || (first != std::string::npos && text[first] == '{');
    return parse_waypoints(text, as_json);
}

void parse_limits(const json& doc, std::size_t joints, std::vector<JointLimits>& limits,
                  std::vector<JointBoundary>& boundary) {
    const auto v = joint_array(doc, "v_max", joints, "limits");
    const auto a = joint_array(doc, "a_max", joints, "limits");
    const auto jm = joint_array(doc, "j_max", joints, "limits");
    limits.clear();
    for (std::size_t j = 0; j < joints; ++j) {
        const std::pair<const char*, double> bounds[] = {{"v_max", v[j]}, {"a_max", a[j]}, {"j_max", jm[j]}};
        for (const auto& [name, value] : bounds) {
            if (!(value > 0.0) || !std::isfinite(value)) {
                throw InputError(std::string("limits: ") + name + " of joint " + std::to_string(j + 1) +
                                 " must be positive and finite");
            }
        }
        limits.push_back({v[j], a[j], jm[j]});
    }
    boundary.assign(joints, JointBoundary{});
    if (!doc.contains("boundary")) return;
    const auto& b = doc.at("boundary");
    auto read_end = [&](const char* key, bool initial) {
        if (!b.contains(key)) return;
        const auto& e = b.at(key);
        const std::string where = std::string("limits.boundary.") + key;
        for (const char* field : {"velocity", "acceleration", "jerk"}) {
            if (!e.contains(field)) continue;
            const auto vals = joint_array(e, field, joints, where);
            for (std::size_t j = 0; j < joints; ++j) {
                auto& ec = initial ? boundary[j].initial : boundary[j].final;
                const std::string f = field;
                (f == "velocity" ? ec.velocity : f == "acceleration" ? ec.acceleration : ec.jerk) = vals[j];
            }
        }
    };
    read_end("initial", true);
    read_end("final", false);
}

TrajectoryProblem load_problem(const fs::path& waypoints, const fs::path& limits) {
    auto table = read_waypoints(waypoints);
    TrajectoryProblem p;
    p.joint_names = std::move(table.joint_names);
    p.waypoints = std::move(table.waypoints);
    json doc;
    try {
        doc = json::parse(read_text(limits));
    } catch (const json::exception& e) {
        throw InputError(std::string("limits: invalid JSON: ") + e.what());
    }
    parse_limits(doc, p.waypoints.size(), p.limits, p.boundary);
    p.validate();
    return p;
}

TrajectoryProblem load_waypoints_only(const fs::path& waypoints) {
    auto table = read_waypoints(waypoints);
    TrajectoryProblem p;
    p.joint_names = std::move(table.joint_names);
    p.waypoints = std::move(table.waypoints);
    p.limits.assign(p.waypoints.size(), JointLimits{1.0, 1.0, 1.0});
    p.boundary.assign(p.waypoints.size(), JointBoundary{});
    p.validate();
    return p;
}

std::string problem_hash(const TrajectoryProblem& problem) {
    std::ostringstream os;
    os << "D=" << problem.joints() << ";W=" << problem.waypoint_count() << ";";
    for (std::size_t j = 0; j < problem.joints(); ++j) {
        os << "w";
        for (double w : problem.waypoints[j]) os << "," << format_double(w);
        const auto& l = problem.limits[j];
        os << ";l," << format_double(l.v_max) << "," << format_double(l.a_max) << "," << format_double(l.j_max);
        const auto& b = problem.boundary[j];
        os << ";b";
        for (const auto* e : {&b.initial, &b.final})
            os << "," << format_double(e->velocity) << "," << format_double(e->acceleration) << ","
               << format_double(e->jerk);
        os << ";";
    }
    return fnv1a_hex(os.str());
}

json ladder_to_json(const SolutionLadder& ladder, const std::string& hash, std::uint64_t seed, std::size_t joints) {
    json doc;
    doc["format"] = "hrvtraj.ladder";
    doc["version"] = 1;
    doc["problem_hash"] = hash;
    doc["seed"] = seed;
    doc["joints"] = joints;
    doc["requested_size"] = ladder.requested;
    doc["undersized"] = ladder.undersized;
    json entries = json::array();
    for (std::size_t i = 0; i < ladder.entries.size(); ++i) {
        const auto& e = ladder.entries[i];
        entries.push_back({{"index", i + 1},
                           {"h", std::vector<double>(e.h.values().begin(), e.h.values().end())},
                           {"t_f", e.duration()},
                           {"f_time", e.f_time},
                           {"f_jerk", e.f_jerk},
                           {"feasible", e.feasible}});
    }
    doc["entries"] = std::move(entries);
    return doc;
}

SolutionLadder ladder_from_json(const json& doc) {
    SolutionLadder ladder;
    if (!doc.is_object()) throw InputError("ladder: expected a JSON object");
    if (doc.contains("format") && doc.at("format") != "hrvtraj.ladder") {
        throw InputError("ladder: 'format' must be \"hrvtraj.ladder\"");
    }
    const auto& entries = require(doc, "entries", "ladder");
    if (!entries.is_array() || entries.empty()) throw InputError("ladder: 'entries' must be a non-empty array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string where = "ladder.entries[" + std::to_string(i) + "]";
        const auto& e = entries[i];
        LadderEntry le;
        try {
            le.h = IntervalVector(number_array(require(e, "h", where), where + ".h"));
        } catch (const std::invalid_argument& ex) {
            throw InputError(where + ".h: " + ex.what());
        }
        le.f_time = number_or(e, "f_time", le.h.total(), where);
        le.f_jerk = number_or(e, "f_jerk", 0.0, where);
        le.feasible = e.value("feasible", true);
        ladder.entries.push_back(std::move(le));
    }
    ladder.requested = doc.value("requested_size", ladder.entries.size());
    ladder.undersized = doc.value("undersized", false);
    return ladder;
}

json front_to_json(const NsgaResult& result, const std::string& hash, const NsgaOptions& options) {
    json doc;
    doc["format"] = "hrvtraj.front";
    doc["version"] = 1;
    doc["problem_hash"] = hash;
    doc["seed"] = options.seed;
    doc["population"] = options.population;
    doc["generations"] = options.generations;
    doc["reference"] = {result.reference[0], result.reference[1]};
    json hv = json::array();
    for (const auto& s : result.history) hv.push_back(s.archive_hypervolume);
    doc["hypervolume_history"] = std::move(hv);
    json entries = json::array();
    for (const auto& p : result.front) {
        entries.push_back({{"h", std::vector<double>(p.h.values().begin(), p.h.values().end())},
                           {"f_time", p.f_time},
                           {"f_jerk", p.f_jerk},
                           {"feasible", p.feasible},
                           {"violation", p.violation}});
    }
    doc["entries"] = std::move(entries);
    return doc;
}

std::vector<RrSample> parse_rr_csv(const std::string& text) {
    const auto csv = parse_csv(text, "rr");
    std::vector<RrSample> out;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& r = csv.rows[i];
        const std::string where = "rr: line " + std::to_string(csv.line_numbers[i]);
        if (r.size() < 2) throw InputError(where + " needs timestamp_s and rr_s");
        if (!(r[1] > 0.0)) throw InputError(where + ": rr_s must be positive");
        if (!out.empty() && !(r[0] > out.back().timestamp)) throw InputError(where + ": timestamps must strictly increase");
        out.push_back({r[0], r[1]});
    }
    return out;
}

std::vector<RrSample> read_rr_csv(const fs::path& path) { return parse_rr_csv(read_text(path)); }

std::vector<double> read_event_log(const fs::path& path) {
    const auto csv = parse_csv(read_text(path), "error log");
    std::vector<double> out;
    for (const auto& r : csv.rows)
        if (!r.empty()) out.push_back(r[0]);
    return out;
}

std::string timeline_csv(const std::vector<TimelineRow>& rows) {
    std::ostringstream os;
    const std::size_t paths = rows.empty() ? 1 : rows.front().index.size();
    os << "window_end_s,mean_rr_s,delta,index";
    for (std::size_t p = 1; p < paths; ++p) os << ",index_" << (p + 1);
    os << ",gap,branch\n";
    for (const auto& r : rows) {
        os << format_double(r.window_end) << "," << format_double(r.mean_rr) << "," << r.delta;
        for (int k : r.index) os << "," << k;
        os << "," << (r.gap ? 1 : 0) << "," << branch_name(r.branch) << "\n";
    }
    return os.str();
}

std::string cycles_csv(const std::vector<CycleRecord>& rows) {
    std::ostringstream os;
    os << "cycle,start_s,end_s,robot_time_s,human_time_s,indices\n";
    for (const auto& r : rows) {
        os << r.cycle << "," << format_double(r.start) << "," << format_double(r.end) << ","
           << format_double(r.robot_time) << "," << format_double(r.human_time) << ",";
        for (std::size_t i = 0; i < r.indices.size(); ++i) os << (i ? ";" : "") << r.indices[i];
        os << "\n";
    }
    return os.str();
}

std::string trajectory_csv(const std::vector<TrajectorySample>& rows, const std::vector<std::string>& names) {
    std::ostringstream os;
    os << "t";
    for (const char* prefix : {"q_", "qd_", "qdd_", "qddd_"})
        for (const auto& n : names) os << "," << prefix << n;
    os << "\n";
    for (const auto& r : rows) {
        os << format_double(r.t);
        for (const auto* col : {&r.position, &r.velocity, &r.acceleration, &r.jerk})
            for (double v : *col) os << "," << format_double(v);
        os << "\n";
    }
    return os.str();
}

HrvParams hrv_from_json(const json& doc) {
    const std::string where = "hrv";
    HrvParams p = HrvParams::for_rest(number_or(doc, "rr_rest", 0.80, where));
    p.rr_stress = number_or(doc, "rr_stress", p.rr_stress, where);
    p.delta_rest_to_stress = number_or(doc, "delta_rs", p.delta_rest_to_stress, where);
    p.delta_stress_to_rest = number_or(doc, "delta_sr", p.delta_stress_to_rest, where);
    p.sigma_rest = number_or(doc, "sigma_rest", p.sigma_rest, where);
    p.sigma_stress = number_or(doc, "sigma_stress", p.sigma_stress, where);
    p.window = number_or(doc, "window_s", p.window, where);
    return p;
}

json hrv_to_json(const HrvParams& p) {
    return {{"rr_rest", p.rr_rest},           {"rr_stress", p.rr_stress},       {"delta_rs", p.delta_rest_to_stress},
            {"delta_sr", p.delta_stress_to_rest}, {"sigma_rest", p.sigma_rest}, {"sigma_stress", p.sigma_stress},
            {"window_s", p.window}};
}

SessionConfig session_from_json(const json& doc, const fs::path& base_dir) {
    SessionConfig c;
    const std::string where = "config";
    c.duration = number_or(doc, "duration_s", 600.0, where);
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) throw InputError("config: field 'seed' must be a non-negative integer");
        c.seed = doc.at("seed").get<std::uint64_t>();
    }
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };

    const auto& paths = require(doc, "paths", where);
    if (!paths.is_array() || paths.empty()) throw InputError("config: 'paths' must be a non-empty array");
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& p = paths[i];
        const std::string pw = "config.paths[" + std::to_string(i) + "]";
        PathConfig pc;
        pc.name = p.value("name", "path" + std::to_string(i + 1));
        if (p.contains("ladder")) {
            json ld;
            try {
                ld = json::parse(read_text(resolve(p.at("ladder").get<std::string>())));
            } catch (const json::exception& e) {
                throw InputError(pw + ".ladder: invalid JSON: " + e.what());
            }
            pc.ladder = ladder_from_json(ld);
        } else if (p.contains("durations_s")) {
            for (double d : number_array(p.at("durations_s"), pw + ".durations_s")) {
                if (!(d > 0.0)) throw InputError(pw + ".durations_s: durations must be positive");
                pc.ladder.entries.push_back({IntervalVector({d}), d, 0.0, true});
            }
            pc.ladder.requested = pc.ladder.entries.size();
        } else {
            throw InputError(pw + ": needs 'ladder' or 'durations_s'");
        }
        c.paths.push_back(std::move(pc));
    }

    if (doc.contains("human_phase")) {
        const auto& h = doc.at("human_phase");
        const std::string kind = h.value("kind", "constant");
        if (kind == "constant") {
            c.human.kind = HumanPhaseModel::Kind::Constant;
            c.human.value = number_or(h, "duration_s", 0.0, "config.human_phase");
        } else if (kind == "uniform") {
            c.human.kind = HumanPhaseModel::Kind::Uniform;
            c.human.min = number_field(h, "min_s", "config.human_phase");
            c.human.max = number_field(h, "max_s", "config.human_phase");
        } else {
            throw InputError("config.human_phase: unknown kind '" + kind + "'");
        }
    }

    if (doc.contains("rr_source")) {
        const auto& r = doc.at("rr_source");
        const std::string kind = r.value("kind", "none");
        if (kind == "file") {
            c.rr.kind = RrSource::Kind::Replay;
            c.rr.samples = read_rr_csv(resolve(require(r, "path", "config.rr_source").get<std::string>()));
        } else if (kind == "synthetic") {
            c.rr.kind = RrSource::Kind::Synthetic;
            c.rr.profile.noise = number_or(r, "noise_s", 0.0, "config.rr_source");
            const auto& segs = require(r, "segments", "config.rr_source");
            if (!segs.is_array()) throw InputError("config.rr_source.segments must be an array");
            for (std::size_t i = 0; i < segs.size(); ++i) {
                const std::string sw = "config.rr_source.segments[" + std::to_string(i) + "]";
                RrSegment s;
                s.start = number_field(segs[i], "start_s", sw);
                s.end = number_field(segs[i], "end_s", sw);
                s.rr = number_field(segs[i], "rr_s", sw);
                s.slope = number_or(segs[i], "slope", 0.0, sw);
                c.rr.profile.segments.push_back(s);
            }
        } else if (kind != "none") {
            throw InputError("config.rr_source: unknown kind '" + kind + "'");
        }
    }

    if (doc.contains("hrv")) c.hrv = hrv_from_json(doc.at("hrv"));
    if (doc.contains("pin_index") && !doc.at("pin_index").is_null()) {
        if (!doc.at("pin_index").is_number_integer()) throw InputError("config: 'pin_index' must be an integer");
        c.pinned_index = doc.at("pin_index").get<int>();
    }
    if (doc.contains("error_log")) c.error_events = read_event_log(resolve(doc.at("error_log").get<std::string>()));
    c.real_time_factor = number_or(doc, "real_time_factor", 0.0, where);
    return c;
}

SessionConfig read_session_config(const fs::path& path) {
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw InputError(std::string("config: invalid JSON: ") + e.what());
    }
    return session_from_json(doc, path.parent_path());
}

json report_to_json(const SessionReport& r, const SessionConfig& config) {
    json doc;
    doc["format"] = "hrvtraj.report";
    doc["version"] = 1;
    doc["duration_s"] = r.duration;
    doc["seed"] = config.seed;
    doc["cycles"] = r.cycles;
    doc["errors"] = r.errors;
    doc["production_rate"] = r.stats.production_rate;
    doc["error_rate"] = r.stats.error_rate ? json(*r.stats.error_rate) : json(nullptr);
    doc["error_rate_defined"] = r.stats.error_rate.has_value();
    doc["pinned"] = r.pinned;
    doc["pin_index"] = config.pinned_index ? json(*config.pinned_index) : json(nullptr);
    doc["truncated"] = r.truncated;
    doc["hrv"] = hrv_to_json(config.hrv);
    json timeline = json::array();
    for (const auto& t : r.timeline) {
        timeline.push_back({{"window_end_s", t.window_end},
                            {"mean_rr_s", t.mean_rr},
                            {"delta", t.delta},
                            {"index", t.index},
                            {"gap", t.gap},
                            {"branch", branch_name(t.branch)}});
    }
    doc["timeline"] = std::move(timeline);
    json cycles = json::array();
    for (const auto& c : r.cycle_table) {
        cycles.push_back({{"cycle", c.cycle},
                          {"start_s", c.start},
                          {"end_s", c.end},
                          {"robot_time_s", c.robot_time},
                          {"human_time_s", c.human_time},
                          {"indices", c.indices}});
    }
    doc["cycle_table"] = std::move(cycles);
    return doc;
}

}  // namespace hrvtraj::io
