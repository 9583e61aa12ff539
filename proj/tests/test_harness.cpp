#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>

#include "hrvtraj/errors.hpp"
#include "hrvtraj/harness.hpp"

using namespace hrvtraj;

namespace {

// Entry k (one-based) lasts base - k * step seconds, so higher is faster.
SolutionLadder ladder(std::size_t n, double base = 20.0, double step = 1.0) {
    SolutionLadder l;
    l.requested = n;
    for (std::size_t k = 1; k <= n; ++k) {
        const double tf = base - static_cast<double>(k) * step;
        l.entries.push_back({IntervalVector({tf / 2, tf / 2}), tf, 1.0 / tf, true});
    }
    return l;
}

RrProfile constant_profile(double rr, double T, double noise = 0.0) {
    return RrProfile{{{0.0, T, rr, 0.0}}, noise};
}

SessionConfig base_config() {
    SessionConfig c;
    c.duration = 600.0;
    c.paths = {{"pick", ladder(15)}, {"place", ladder(15, 12.0, 0.5)}};
    c.human = {HumanPhaseModel::Kind::Constant, 5.0, 0, 0};
    c.rr.kind = RrSource::Kind::Synthetic;
    c.rr.profile = constant_profile(0.80, 600.0);
    return c;
}

}  // namespace

TEST_CASE("productivity statistics") {
    auto s = compute_stats(10, 0, 600.0);
    CHECK(s.production_rate == 1.0);
    CHECK(s.error_rate.value() == 0.0);
    s = compute_stats(8, 2, 600.0);
    CHECK(s.error_rate.value() == 0.25);
    CHECK(s.production_rate == 60.0 * 8 / 600.0);
    CHECK(compute_stats(0, 0, 600.0).error_rate.value() == 0.0);
    CHECK(!compute_stats(0, 3, 600.0).error_rate);
    CHECK_THROWS_AS(compute_stats(1, 0, 0.0), std::invalid_argument);
}

TEST_CASE("fixed single-path session counts whole cycles") {
    SessionConfig c;
    c.duration = 600.0;
    SolutionLadder one;
    one.entries.push_back({IntervalVector({20, 20, 20}), 60, 1, true});
    c.paths = {{"only", one}};
    c.human = {HumanPhaseModel::Kind::Constant, 0.0, 0, 0};
    c.pinned_index = 1;
    const auto r = run_session(c);
    CHECK(r.cycles == 10);
    CHECK(r.stats.production_rate == 1.0);
    CHECK(r.cycle_table.back().end == 600.0);
    CHECK(r.timeline.size() == 20);
}

TEST_CASE("constant resting RR holds the initial index") {
    const auto r = run_session(base_config());
    REQUIRE(r.timeline.size() == 20);
    for (const auto& row : r.timeline) CHECK(row.index == std::vector<int>{8, 8});
    for (const auto& c : r.cycle_table) CHECK(c.indices == std::vector<int>{8, 8});
}

TEST_CASE("decreasing RR slows the cell down, matching a replay of the decision rule") {
    auto c = base_config();
    c.rr.profile = RrProfile{{{0.0, 600.0, 0.80, -0.0005}}, 0.0};
    const auto r = run_session(c);
    const auto stream = synth_rr(c.rr.profile, 600.0, c.seed);

    DecisionState state;
    state.index = {8, 8};
    std::vector<std::size_t> sizes{15, 15};
    REQUIRE(r.timeline.size() == 20);
    for (std::size_t i = 0; i < r.timeline.size(); ++i) {
        const double end = 30.0 * static_cast<double>(i + 1);
        double sum = 0.0;
        int n = 0;
        for (const auto& s : stream)
            if (s.timestamp > end - 30.0 && s.timestamp <= end) sum += s.rr, ++n;
        REQUIRE(n > 0);
        const double mean = sum / n;
        const auto d = decide_step(mean, state, c.hrv);
        state = apply_step(state, d.delta, sizes);
        state.prev_mean_rr = mean;
        CHECK(r.timeline[i].index == state.index);
        if (i) CHECK(r.timeline[i].index[0] <= r.timeline[i - 1].index[0]);
    }
    CHECK(r.timeline.back().index[0] < 8);
    CHECK(r.cycle_table.back().robot_time >= r.cycle_table.front().robot_time);
}

TEST_CASE("every trajectory uses one index for its whole execution") {
    auto c = base_config();
    c.rr.profile = RrProfile{{{0.0, 300.0, 0.80, 0.0}, {300.0, 600.0, 0.66, -0.0004}}, 0.01};
    const auto r = run_session(c);
    for (const auto& rec : r.cycle_table) {
        const double want = c.paths[0].ladder.entries[rec.indices[0] - 1].duration() +
                            c.paths[1].ladder.entries[rec.indices[1] - 1].duration();
        CHECK(rec.robot_time == doctest::Approx(want).epsilon(1e-15));
        CHECK(rec.end - rec.start == doctest::Approx(rec.robot_time + 5.0));
    }
}

TEST_CASE("synthetic RR streams") {
    const auto flat = synth_rr(constant_profile(0.8, 600.0), 600.0, 1);
    for (const auto& s : flat) CHECK(s.rr == 0.8);
    for (double end = 30.0; end <= 600.0; end += 30.0)
        CHECK(window_mean(flat, end, 30.0).value() == doctest::Approx(0.8).epsilon(1e-12));

    RrProfile step{{{0.0, 300.0, 0.8, 0.0}, {300.0, 600.0, 0.7, 0.0}}, 0.0};
    const auto s = synth_rr(step, 600.0, 1);
    for (double end = 30.0; end <= 600.0; end += 30.0) {
        const double m = window_mean(s, end, 30.0).value();
        if (end <= 300.0) CHECK(m == doctest::Approx(0.8));
        else CHECK(m < 0.8);
    }

    CHECK_THROWS_AS(synth_rr(constant_profile(-0.1, 600.0), 600.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(synth_rr(constant_profile(0.8, 300.0), 600.0, 1), std::invalid_argument);
    RrProfile holey{{{0.0, 200.0, 0.8, 0.0}, {250.0, 600.0, 0.8, 0.0}}, 0.0};
    CHECK_THROWS_AS(synth_rr(holey, 600.0, 1), std::invalid_argument);
}

TEST_CASE("noisy windowed means stay within three standard errors") {
    const double noise = 0.05, target = 0.8;
    int outside_any = 0, windows = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto s = synth_rr(constant_profile(target, 600.0, noise), 600.0, seed);
        for (double end = 30.0; end <= 600.0; end += 30.0) {
            std::size_t n = 0;
            for (const auto& b : s) n += (b.timestamp > end - 30.0 && b.timestamp <= end);
            const double m = window_mean(s, end, 30.0).value();
            const bool inside = std::abs(m - target) <= 3.0 * noise / std::sqrt(static_cast<double>(n));
            if (end == 300.0) CHECK(inside);
            outside_any += !inside;
            ++windows;
        }
    }
    // About 0.3% of windows fall outside three standard errors by chance.
    CHECK(outside_any <= windows / 100);
}

TEST_CASE("pinned pace ordering") {
    auto c = base_config();
    c.human = {HumanPhaseModel::Kind::Uniform, 0, 2.0, 8.0};
    std::size_t prev = 0;
    for (int k = 1; k <= 15; ++k) {
        c.pinned_index = k;
        const auto r = run_session(c);
        CHECK(r.pinned);
        CHECK(r.cycles >= prev);
        prev = r.cycles;
        for (const auto& row : r.timeline) CHECK(row.index[0] == k);
    }
}

TEST_CASE("replayed errors and error rate") {
    auto c = base_config();
    c.error_events = {10.0, 200.0, 599.0, 700.0};
    const auto r = run_session(c);
    CHECK(r.errors == 3);
    CHECK(r.stats.error_rate.value() == doctest::Approx(3.0 / static_cast<double>(r.cycles)));
    CHECK(r.stats.production_rate == 60.0 * static_cast<double>(r.cycles) / 600.0);
}

TEST_CASE("exhausted RR stream truncates the session") {
    auto c = base_config();
    c.rr.kind = RrSource::Kind::Replay;
    for (double t = 0.8; t < 200.0; t += 0.8) c.rr.samples.push_back({t, 0.8});
    c.error_events = {50.0, 400.0};
    try {
        run_session(c);
        FAIL("expected TruncatedSession");
    } catch (const TruncatedSession& e) {
        const auto& p = e.partial();
        CHECK(p.truncated);
        CHECK(p.timeline.size() == 7);  // windows ending at 30..210; (210, 240] is empty
        CHECK(p.cycles > 0);
        CHECK(p.errors == 1);
    }
}

TEST_CASE("adaptive sessions need RR data and valid configuration") {
    auto c = base_config();
    c.rr.kind = RrSource::Kind::None;
    CHECK_THROWS_AS(run_session(c), InputError);
    c = base_config();
    c.pinned_index = 16;
    CHECK_THROWS_AS(run_session(c), InputError);
    c = base_config();
    c.duration = 0.0;
    CHECK_THROWS_AS(run_session(c), InputError);
}

TEST_CASE("sessions are deterministic and fast") {
    auto c = base_config();
    c.rr.profile = RrProfile{{{0.0, 600.0, 0.78, -0.0002}}, 0.03};
    c.human = {HumanPhaseModel::Kind::Uniform, 0, 1.0, 6.0};
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = run_session(c);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto b = run_session(c);
    CHECK(elapsed < 1.0);
    REQUIRE(a.cycle_table.size() == b.cycle_table.size());
    for (std::size_t i = 0; i < a.cycle_table.size(); ++i) {
        CHECK(a.cycle_table[i].end == b.cycle_table[i].end);
        CHECK(a.cycle_table[i].indices == b.cycle_table[i].indices);
    }
    REQUIRE(a.timeline.size() == b.timeline.size());
    for (std::size_t i = 0; i < a.timeline.size(); ++i) CHECK(a.timeline[i].mean_rr == b.timeline[i].mean_rr);
}

TEST_CASE("real-time pacing keeps the simulated results") {
    auto c = base_config();
    c.duration = 60.0;
    c.rr.profile = constant_profile(0.8, 60.0);
    const auto fast = run_session(c);
    c.real_time_factor = 1000.0;
    const auto t0 = std::chrono::steady_clock::now();
    const auto paced = run_session(c);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(elapsed >= 0.05);
    CHECK(paced.cycles == fast.cycles);
}
