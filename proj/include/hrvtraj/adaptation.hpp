#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

namespace hrvtraj {

/// One heartbeat: the beat timestamp and the RR interval ending at it.
struct RrSample {
    double timestamp = 0.0;  // s
    double rr = 0.0;         // s
};

/// Thresholds and reference levels of the HRV decision maker (seconds).
struct HrvParams {
    double delta_rest_to_stress = 0.02;
    double delta_stress_to_rest = 0.01;
    double rr_rest = 0.80;
    double rr_stress = 0.70;
    double sigma_rest = 0.14;
    double sigma_stress = 0.06;
    double window = 30.0;

    /// Defaults for a subject with the given resting mean RR: the stress
    /// reference sits 0.10 s below rest.
    static HrvParams for_rest(double rr_rest);

    double rr_stress_max() const noexcept { return rr_stress - sigma_stress; }

    /// Throws std::invalid_argument for non-positive values or
    /// rr_stress >= rr_rest.
    void validate() const;
};

/// Mean RR of samples with timestamps in (window_end - window, window_end],
/// or nullopt when that window holds no beat.
std::optional<double> window_mean(std::span<const RrSample> stream, double window_end, double window);

/// Decision-maker state.
struct DecisionState {
    std::optional<double> prev_mean_rr;
    /// One-based ladder index per path.
    std::vector<int> index;
};

enum class DecisionBranch { Initialize, Stress, Rest, CumulativeStress, Hold, Gap };

struct Decision {
    int delta = 0;
    DecisionBranch branch = DecisionBranch::Hold;
};

/// One decision from the current window mean against state.prev_mean_rr.
/// With no previous mean the call only initializes (delta 0). Comparisons
/// and step counts are evaluated on values rounded to whole microseconds.
Decision decide_step(double mean_rr, const DecisionState& state, const HrvParams& params);

/// Adds delta to every path index and clamps each to [1, ladder_sizes[i]].
DecisionState apply_step(DecisionState state, int delta, std::span<const std::size_t> ladder_sizes);

/// Initial index round(n - sigma_r / delta_rs) clamped to [1, n], for every
/// path.
DecisionState init_state(const HrvParams& params, std::span<const std::size_t> ladder_sizes);
int initial_index(const HrvParams& params, std::size_t ladder_size);

/// One row of the index timeline.
struct TimelineRow {
    double window_end = 0.0;
    double mean_rr = 0.0;
    int delta = 0;
    std::vector<int> index;
    bool gap = false;
    DecisionBranch branch = DecisionBranch::Hold;
};

/// Runs the decision maker window by window over a recorded stream.
class DecisionMaker {
public:
    DecisionMaker(HrvParams params, std::vector<std::size_t> ladder_sizes);

    /// Consumes the window ending at window_end. A window without beats
    /// carries the previous mean forward, emits delta 0 and is flagged.
    TimelineRow step(std::span<const RrSample> stream, double window_end);

    const DecisionState& state() const noexcept { return state_; }
    const HrvParams& params() const noexcept { return params_; }

private:
    HrvParams params_;
    std::vector<std::size_t> sizes_;
    DecisionState state_;
};

/// Timeline over consecutive non-overlapping windows ending at
/// window, 2*window, ... until a window would start at or after the last
/// beat. Throws std::invalid_argument for an empty stream.
std::vector<TimelineRow> adapt_stream(std::span<const RrSample> stream, const HrvParams& params,
                                      std::size_t ladder_size);

/// Index store shared between the decision writer and trajectory readers.
class SharedIndex {
public:
    explicit SharedIndex(std::vector<int> initial) : index_(std::move(initial)) {}

    std::vector<int> snapshot() const {
        std::scoped_lock lock(mutex_);
        return index_;
    }
    int get(std::size_t path) const {
        std::scoped_lock lock(mutex_);
        return index_.at(path);
    }
    void publish(std::vector<int> index) {
        std::scoped_lock lock(mutex_);
        index_ = std::move(index);
    }

private:
    mutable std::mutex mutex_;
    std::vector<int> index_;
};

const char* branch_name(DecisionBranch b) noexcept;

}  // namespace hrvtraj
