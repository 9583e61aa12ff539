#include "hrvtraj/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrvtraj {

HrvParams HrvParams::for_rest(double rr_rest) {
    HrvParams p;
    p.rr_rest = rr_rest;
    p.rr_stress = rr_rest - 0.10;
    return p;
}

void HrvParams::validate() const {
    const double vals[] = {delta_rest_to_stress, delta_stress_to_rest, rr_rest, rr_stress, window};
    for (double v : vals) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("HRV parameters must be positive");
    }
    if (!(sigma_rest >= 0.0) || !(sigma_stress >= 0.0)) {
        throw std::invalid_argument("HRV spread parameters must be non-negative");
    }
    if (!(rr_stress < rr_rest)) throw std::invalid_argument("stress RR reference must lie below rest RR");
}

std::optional<double> window_mean(std::span<const RrSample> stream, double window_end, double window) {
    const double start = window_end - window;
    // Timestamps are strictly increasing.
    auto first = std::upper_bound(stream.begin(), stream.end(), start,
                                  [](double t, const RrSample& s) { return t < s.timestamp; });
    auto last = std::upper_bound(first, stream.end(), window_end,
                                 [](double t, const RrSample& s) { return t < s.timestamp; });
    if (first == last) return std::nullopt;
    double sum = 0.0;
    for (auto it = first; it != last; ++it) sum += it->rr;
    return sum / static_cast<double>(last - first);
}

namespace {

using Micros = std::int64_t;

Micros micros(double seconds) { return static_cast<Micros>(std::llround(seconds * 1e6)); }

Micros floor_div(Micros a, Micros b) {
    Micros q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Micros ceil_div(Micros a, Micros b) { return -floor_div(-a, b); }

}  // namespace

Decision decide_step(double mean_rr, const DecisionState& state, const HrvParams& params) {
    if (!state.prev_mean_rr) return {0, DecisionBranch::Initialize};
    const Micros mean = micros(mean_rr);
    const Micros prev = micros(*state.prev_mean_rr);
    const Micros rest = micros(params.rr_rest);
    const Micros stress = micros(params.rr_stress);
    const Micros stress_max = micros(params.rr_stress) - micros(params.sigma_stress);
    const Micros d_rs = micros(params.delta_rest_to_stress);
    const Micros d_sr = micros(params.delta_stress_to_rest);
    const Micros change = mean - prev;

    if (change < -d_rs && mean < rest) {
        const Micros drop = mean - std::min(rest, prev);
        return {static_cast<int>(floor_div(drop + d_rs, d_rs)), DecisionBranch::Stress};
    }
    if (change > 0 && mean >= stress) {
        const Micros rise = mean - std::max(stress, prev);
        // At least one step: a rise that only reaches the stress line exactly
        // still leaves the stress range.
        return {static_cast<int>(std::max<Micros>(1, ceil_div(rise, d_sr))), DecisionBranch::Rest};
    }
    if (mean < stress_max) return {-1, DecisionBranch::CumulativeStress};
    return {0, DecisionBranch::Hold};
}

DecisionState apply_step(DecisionState state, int delta, std::span<const std::size_t> ladder_sizes) {
    if (ladder_sizes.size() != state.index.size()) {
        throw std::invalid_argument("ladder size count does not match path count");
    }
    for (std::size_t i = 0; i < state.index.size(); ++i) {
        const int n = static_cast<int>(ladder_sizes[i]);
        state.index[i] = std::clamp(state.index[i] + delta, 1, std::max(1, n));
    }
    return state;
}

int initial_index(const HrvParams& params, std::size_t ladder_size) {
    const double n = static_cast<double>(ladder_size);
    const double raw = std::round(n - params.sigma_rest / params.delta_rest_to_stress);
    if (!(raw >= 1.0)) return 1;
    return static_cast<int>(std::min(raw, n));
}

DecisionState init_state(const HrvParams& params, std::span<const std::size_t> ladder_sizes) {
    DecisionState s;
    for (std::size_t n : ladder_sizes) s.index.push_back(initial_index(params, n));
    return s;
}

DecisionMaker::DecisionMaker(HrvParams params, std::vector<std::size_t> ladder_sizes)
    : params_(params), sizes_(std::move(ladder_sizes)), state_(init_state(params_, sizes_)) {
    params_.validate();
}

TimelineRow DecisionMaker::step(std::span<const RrSample> stream, double window_end) {
    TimelineRow row;
    row.window_end = window_end;
    const auto mean = window_mean(stream, window_end, params_.window);
    if (!mean) {
        row.gap = true;
        row.branch = DecisionBranch::Gap;
        // Before any data the subject is assumed at rest.
        row.mean_rr = state_.prev_mean_rr.value_or(params_.rr_rest);
        row.index = state_.index;
        return row;
    }
    const Decision d = decide_step(*mean, state_, params_);
    state_ = apply_step(std::move(state_), d.delta, sizes_);
    state_.prev_mean_rr = *mean;
    row.mean_rr = *mean;
    row.delta = d.delta;
    row.branch = d.branch;
    row.index = state_.index;
    return row;
}

std::vector<TimelineRow> adapt_stream(std::span<const RrSample> stream, const HrvParams& params,
                                      std::size_t ladder_size) {
    if (stream.empty()) throw std::invalid_argument("RR stream is empty");
    DecisionMaker dm(params, {ladder_size});
    std::vector<TimelineRow> rows;
    const double end = stream.back().timestamp;
    for (std::size_t k = 1;; ++k) {
        const double window_end = static_cast<double>(k) * params.window;
        // The last window may be partial; windows starting after the final
        // beat are not emitted.
        if (window_end - params.window >= end) break;
        rows.push_back(dm.step(stream, window_end));
    }
    return rows;
}

const char* branch_name(DecisionBranch b) noexcept {
    switch (b) {
        case DecisionBranch::Initialize: return "init";
        case DecisionBranch::Stress: return "stress";
        case DecisionBranch::Rest: return "rest";
        case DecisionBranch::CumulativeStress: return "cumulative_stress";
        case DecisionBranch::Hold: return "hold";
        case DecisionBranch::Gap: return "gap";
    }
    return "unknown";
}

}  // namespace hrvtraj
