#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrvtraj/adaptation.hpp"
#include "hrvtraj/pareto.hpp"

namespace hrvtraj {

/// Linear RR target rr + slope*(t - start) on [start, end).
struct RrSegment {
    double start = 0.0;
    double end = 0.0;
    double rr = 0.8;
    double slope = 0.0;  // s per s
};

struct RrProfile {
    std::vector<RrSegment> segments;
    /// Standard deviation of the zero-mean Gaussian added to each interval.
    double noise = 0.0;

    /// Target RR at time t. Throws std::invalid_argument if t is uncovered.
    double target(double t) const;
};

/// Beat stream whose intervals follow the profile target at each beat's
/// start, plus noise. Throws std::invalid_argument if the profile leaves
/// [0, duration] uncovered or any target is non-positive.
std::vector<RrSample> synth_rr(const RrProfile& profile, double duration, std::uint64_t seed);

struct HumanPhaseModel {
    enum class Kind { Constant, Uniform } kind = Kind::Constant;
    double value = 0.0;  // constant duration
    double min = 0.0;    // uniform range
    double max = 0.0;
};

struct RrSource {
    enum class Kind { None, Replay, Synthetic } kind = Kind::None;
    std::vector<RrSample> samples;  // replay
    RrProfile profile;              // synthetic
};

struct PathConfig {
    std::string name;
    SolutionLadder ladder;
};

struct SessionConfig {
    double duration = 600.0;
    std::vector<PathConfig> paths;
    HumanPhaseModel human;
    RrSource rr;
    HrvParams hrv;
    std::uint64_t seed = 1;
    /// One-based index held for every path; disables adaptation.
    std::optional<int> pinned_index;
    /// Timestamps of operator errors replayed from a log.
    std::vector<double> error_events;
    /// > 0 paces the event loop against the wall clock (simulated seconds
    /// per wall second); 0 runs as fast as possible.
    double real_time_factor = 0.0;

    /// Throws InputError on the first invalid field.
    void validate() const;
};

struct CycleRecord {
    std::size_t cycle = 0;  // one-based
    double start = 0.0;
    double end = 0.0;
    double robot_time = 0.0;  // gamma
    double human_time = 0.0;
    std::vector<int> indices;  // one-based ladder index per path
};

struct ProductivityStats {
    double production_rate = 0.0;       // boxes per minute
    std::optional<double> error_rate;   // errors per cycle; empty if undefined
};

/// phi = 60 b / T; epsilon = e / b, 0 when b = e = 0 and undefined when
/// b = 0 < e. Throws std::invalid_argument for T <= 0.
ProductivityStats compute_stats(std::size_t cycles, std::size_t errors, double duration);

struct SessionReport {
    double duration = 0.0;
    std::size_t cycles = 0;
    std::size_t errors = 0;
    ProductivityStats stats;
    bool pinned = false;
    bool truncated = false;
    std::vector<TimelineRow> timeline;
    std::vector<CycleRecord> cycle_table;
};

/// Thrown when the RR stream ends before the session does; carries the
/// report up to the exhausted window.
class TruncatedSession : public std::runtime_error {
public:
    TruncatedSession(const std::string& what, SessionReport partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const SessionReport& partial() const noexcept { return partial_; }

private:
    SessionReport partial_;
};

/// Discrete-event simulation of the collaborative cycle. Each cycle runs
/// every path once with the index held at its start, then one human phase.
/// Decisions happen at every window boundary and apply from the next path
/// start. Only cycles finishing by T count.
SessionReport run_session(const SessionConfig& config);

}  // namespace hrvtraj
