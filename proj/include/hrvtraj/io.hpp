#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hrvtraj/harness.hpp"
#include "hrvtraj/interpolation.hpp"
#include "hrvtraj/nsga2.hpp"

namespace hrvtraj::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// "%.17g" formatting used for every CSV number.
std::string format_double(double v);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

struct WaypointTable {
    std::vector<std::string> joint_names;
    std::vector<std::vector<double>> waypoints;  // [joint][waypoint]
};

/// CSV: one row per waypoint, one column per joint, optional header row.
/// JSON: {"joint_names": [...], "waypoints": [[row], ...]}. Chosen by
/// extension (.json) or a leading '{'. Throws InputError naming the fault.
WaypointTable parse_waypoints(const std::string& text, bool as_json);
WaypointTable read_waypoints(const std::filesystem::path& path);

/// {"v_max": [..], "a_max": [..], "j_max": [..],
///  "boundary": {"initial": {"velocity": [..], "acceleration": [..], "jerk": [..]},
///               "final": {...}}}; boundary is optional (zero).
void parse_limits(const json& doc, std::size_t joints, std::vector<JointLimits>& limits,
                  std::vector<JointBoundary>& boundary);

TrajectoryProblem load_problem(const std::filesystem::path& waypoints,
                               const std::filesystem::path& limits);
/// Problem with zero boundary conditions and unit limits.
TrajectoryProblem load_waypoints_only(const std::filesystem::path& waypoints);

/// Hash of the canonical serialization of waypoints, limits and boundary.
std::string problem_hash(const TrajectoryProblem& problem);

json ladder_to_json(const SolutionLadder& ladder, const std::string& problem_hash, std::uint64_t seed,
                    std::size_t joints);
/// Throws InputError for malformed ladders.
SolutionLadder ladder_from_json(const json& doc);

json front_to_json(const NsgaResult& result, const std::string& problem_hash, const NsgaOptions& options);

/// Rows "timestamp_s, rr_s"; optional header; '#' comments. Timestamps must
/// strictly increase and RR values be positive.
std::vector<RrSample> parse_rr_csv(const std::string& text);
std::vector<RrSample> read_rr_csv(const std::filesystem::path& path);

/// One timestamp per row (first column), optional header.
std::vector<double> read_event_log(const std::filesystem::path& path);

std::string timeline_csv(const std::vector<TimelineRow>& rows);
std::string cycles_csv(const std::vector<CycleRecord>& rows);
std::string trajectory_csv(const std::vector<TrajectorySample>& rows, const std::vector<std::string>& names);

/// Session config JSON; relative file references resolve against base_dir.
SessionConfig session_from_json(const json& doc, const std::filesystem::path& base_dir);
SessionConfig read_session_config(const std::filesystem::path& path);

HrvParams hrv_from_json(const json& doc);
json hrv_to_json(const HrvParams& p);

json report_to_json(const SessionReport& report, const SessionConfig& config);

}  // namespace hrvtraj::io
