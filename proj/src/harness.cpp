#include "hrvtraj/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "hrvtraj/errors.hpp"
#include "hrvtraj/random.hpp"

namespace hrvtraj {

double RrProfile::target(double t) const {
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        const bool last = i + 1 == segments.size();
        if (t >= s.start && (t < s.end || (last && t <= s.end))) return s.rr + s.slope * (t - s.start);
    }
    throw std::invalid_argument("RR profile does not cover t=" + std::to_string(t));
}

std::vector<RrSample> synth_rr(const RrProfile& profile, double duration, std::uint64_t seed) {
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
    const auto& segs = profile.segments;
    if (segs.empty()) throw std::invalid_argument("RR profile has no segments");
    if (segs.front().start > 0.0) throw std::invalid_argument("RR profile must start at t=0");
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        if (!(s.end > s.start)) throw std::invalid_argument("RR segment with empty time range");
        if (i + 1 < segs.size() && segs[i + 1].start > s.end) {
            throw std::invalid_argument("RR profile has a gap at t=" + std::to_string(s.end));
        }
        if (!(s.rr > 0.0) || !(s.rr + s.slope * (s.end - s.start) > 0.0)) {
            throw std::invalid_argument("RR target must stay positive");
        }
    }
    if (segs.back().end < duration) throw std::invalid_argument("RR profile ends before the session");
    if (profile.noise < 0.0) throw std::invalid_argument("RR noise must be non-negative");

    Rng rng(seed);
    std::vector<RrSample> out;
    double t = 0.0;
    while (true) {
        const double target = profile.target(t);
        double rr = target;
        if (profile.noise > 0.0) {
            do {
                rr = target + profile.noise * rng.normal();
            } while (rr <= 0.0);
        }
        t += rr;
        if (t > duration) break;
        out.push_back({t, rr});
    }
    return out;
}

void SessionConfig::validate() const {
    if (!(duration > 0.0)) throw InputError("session duration must be positive");
    if (paths.empty()) throw InputError("session needs at least one path");
    for (const auto& p : paths) {
        if (p.ladder.entries.empty()) throw InputError("path '" + p.name + "' has an empty ladder");
    }
    if (human.kind == HumanPhaseModel::Kind::Constant && !(human.value >= 0.0)) {
        throw InputError("human phase duration must be non-negative");
    }
    if (human.kind == HumanPhaseModel::Kind::Uniform && !(human.min >= 0.0 && human.max >= human.min)) {
        throw InputError("human phase range must satisfy 0 <= min <= max");
    }
    if (pinned_index) {
        for (const auto& p : paths) {
            if (*pinned_index < 1 || static_cast<std::size_t>(*pinned_index) > p.ladder.size()) {
                throw InputError("pinned index " + std::to_string(*pinned_index) + " outside ladder of path '" +
                                 p.name + "'");
            }
        }
    } else if (rr.kind == RrSource::Kind::None) {
        throw InputError("adaptive session needs an RR source");
    }
    try {
        hrv.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

ProductivityStats compute_stats(std::size_t cycles, std::size_t errors, double duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("session duration must be positive");
    ProductivityStats s;
    s.production_rate = 60.0 * static_cast<double>(cycles) / duration;
    if (cycles > 0) s.error_rate = static_cast<double>(errors) / static_cast<double>(cycles);
    else if (errors == 0) s.error_rate = 0.0;
    return s;
}

SessionReport run_session(const SessionConfig& config) {
    config.validate();
    const double T = config.duration;

    std::vector<RrSample> stream;
    if (config.rr.kind == RrSource::Kind::Replay) stream = config.rr.samples;
    else if (config.rr.kind == RrSource::Kind::Synthetic) stream = synth_rr(config.rr.profile, T, config.seed);

    std::vector<std::size_t> sizes;
    for (const auto& p : config.paths) sizes.push_back(p.ladder.size());

    DecisionMaker dm(config.hrv, sizes);
    SharedIndex board(config.pinned_index ? std::vector<int>(sizes.size(), *config.pinned_index)
                                          : dm.state().index);
    // Human draws use their own stream so RR synthesis stays independent.
    Rng human_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

    SessionReport report;
    report.duration = T;
    report.pinned = config.pinned_index.has_value();
    double next_window = config.hrv.window;
    auto count_errors = [&](double upto) {
        return static_cast<std::size_t>(std::count_if(config.error_events.begin(), config.error_events.end(),
                                                      [&](double e) { return e >= 0.0 && e <= upto; }));
    };

    auto process_windows = [&](double now) {
        while (next_window <= now && next_window <= T) {
            if (!report.pinned) {
                const bool exhausted = stream.empty() || stream.back().timestamp <= next_window - config.hrv.window;
                if (exhausted) {
                    report.truncated = true;
                    report.errors = count_errors(next_window);
                    report.stats = compute_stats(report.cycles, report.errors, T);
                    throw TruncatedSession("RR stream exhausted before window ending at t=" +
                                               std::to_string(next_window),
                                           report);
                }
            }
            TimelineRow row;
            if (report.pinned) {
                row.window_end = next_window;
                const auto mean = window_mean(stream, next_window, config.hrv.window);
                row.gap = !mean;
                row.mean_rr = mean.value_or(config.hrv.rr_rest);
                row.branch = DecisionBranch::Hold;
                row.index = board.snapshot();
            } else {
                row = dm.step(stream, next_window);
                board.publish(row.index);
            }
            report.timeline.push_back(std::move(row));
            next_window += config.hrv.window;
        }
    };

    const auto wall_start = std::chrono::steady_clock::now();
    auto pace = [&](double sim_time) {
        if (config.real_time_factor <= 0.0) return;
        std::this_thread::sleep_until(wall_start + std::chrono::duration<double>(sim_time / config.real_time_factor));
    };

    double t = 0.0;
    while (true) {
        CycleRecord rec;
        rec.start = t;
        for (std::size_t p = 0; p < config.paths.size(); ++p) {
            process_windows(t);
            const int k = board.get(p);
            rec.indices.push_back(k);
            // The selected entry stays fixed for the whole execution.
            const double tf = config.paths[p].ladder.entries[static_cast<std::size_t>(k - 1)].duration();
            rec.robot_time += tf;
            t += tf;
            pace(std::min(t, T));
        }
        switch (config.human.kind) {
            case HumanPhaseModel::Kind::Constant: rec.human_time = config.human.value; break;
            case HumanPhaseModel::Kind::Uniform:
                rec.human_time = human_rng.uniform(config.human.min, config.human.max);
                break;
        }
        t += rec.human_time;
        rec.end = t;
        if (t > T) break;
        rec.cycle = report.cycles + 1;
        report.cycle_table.push_back(std::move(rec));
        ++report.cycles;
        pace(t);
    }
    process_windows(T);

    report.errors = count_errors(T);
    report.stats = compute_stats(report.cycles, report.errors, T);
    return report;
}

}  // namespace hrvtraj
