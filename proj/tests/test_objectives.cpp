#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hrvtraj/errors.hpp"
#include "hrvtraj/objectives.hpp"
#include "oracles.hpp"

using namespace hrvtraj;

TEST_CASE("time objective") {
    CHECK(eval_time(IntervalVector({1, 1, 1}), 1) == 3.0);
    CHECK(eval_time(IntervalVector({0.5, 0.25, 0.25, 1.0}), 6) == 12.0);
}

TEST_CASE("jerk integral matches dense Simpson quadrature of the oracle curve") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> hd(0.3, 1.5), wd(-1.5, 1.5);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t W = 2 + trial % 5;
        std::vector<double> h(W + 1), w(W);
        for (auto& x : h) x = hd(rng);
        for (auto& x : w) x = wd(rng);
        auto p = TrajectoryProblem::with_zero_boundary({w}, {{1, 1, 1}});
        const double got = eval_jerk(IntervalVector(h), p);

        const auto cp = oracle::interpolate(h, w, {0, 0, 0, 0, 0, 0});
        const auto u = oracle::clamped_knots(h, 5);
        const double want = oracle::simpson(
            [&](double t) {
                const double j = oracle::curve(u, 5, cp, t, 3);
                return j * j;
            },
            0.0, u.back(), 10000);
        CHECK(std::abs(got - want) <= 1e-6 * std::max(1.0, want));
    }
}

TEST_CASE("jerk objective sums over joints") {
    auto one = TrajectoryProblem::with_zero_boundary({{0.0, 0.7, -0.2}}, {{1, 1, 1}});
    auto two = TrajectoryProblem::with_zero_boundary({{0.0, 0.7, -0.2}, {0.0, 0.7, -0.2}},
                                                     {{1, 1, 1}, {1, 1, 1}});
    IntervalVector h({0.4, 0.6, 0.9, 0.3});
    CHECK(eval_jerk(h, two) == doctest::Approx(2.0 * eval_jerk(h, one)).epsilon(1e-14));
    auto flat = TrajectoryProblem::with_zero_boundary({{0.4, 0.4, 0.4}}, {{1, 1, 1}});
    CHECK(eval_jerk(h, flat) == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
}

TEST_CASE("squared jerk of a cubic segment is exact") {
    // Control points of t^3 on a single clamped span would need degree 3;
    // here a quintic with jerk linear in t checks exactness of the rule.
    std::vector<double> u(12, 0.0);
    for (std::size_t i = 6; i < 12; ++i) u[i] = 2.0;
    KnotVector knots(u, 5);
    std::vector<double> cp{0, 0, 0, 0, 0, 1};  // t^5 / 32 on [0, 2]
    SplineCurve c(knots, cp);
    // q''' = 60 t^2 / 32, integral of its square over [0, 2] = (60/32)^2 * 32 / 5.
    const double want = (60.0 / 32.0) * (60.0 / 32.0) * 32.0 / 5.0;
    CHECK(squared_jerk_integral(c) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("constraint excess equals the hand-computed velocity overshoot") {
    const std::vector<double> h{1, 1, 1};
    auto p = TrajectoryProblem::with_zero_boundary({{0.0, 1.0}}, {{0.4, 1e9, 1e9}});
    const auto traj = solve_trajectory(IntervalVector(h), p);
    const auto rep = constraint_margins(traj, p.limits);

    const auto cp = oracle::interpolate(h, {0.0, 1.0}, {0, 0, 0, 0, 0, 0});
    const auto u = oracle::clamped_knots(h, 5);
    double want = 0.0, max_v = 0.0;
    for (std::size_t k = 0; k + 1 < cp.size(); ++k) {
        const double v = 5.0 * (cp[k + 1] - cp[k]) / (u[k + 6] - u[k + 1]);
        want += std::max(0.0, std::abs(v) - 0.4);
        max_v = std::max(max_v, std::abs(v));
    }
    REQUIRE(want > 0.0);
    CHECK(rep.violation == doctest::Approx(want).epsilon(1e-12));
    CHECK(rep.max_ratio[0] == doctest::Approx(max_v / 0.4).epsilon(1e-12));
    CHECK_FALSE(rep.feasible());
    for (const auto& e : rep.excesses) {
        CHECK(e.order == 1);
        CHECK(e.excess == doctest::Approx(std::abs(e.value) - e.bound));
    }

    auto loose = p;
    loose.limits[0] = {10, 100, 1000};
    CHECK(constraint_margins(traj, loose.limits).feasible());
}

TEST_CASE("convex-hull feasibility implies sampled feasibility") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> hd(0.5, 3.0), wd(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> h(5);
        for (auto& x : h) x = hd(rng);
        std::vector<std::vector<double>> w(2, std::vector<double>(4));
        for (auto& r : w)
            for (auto& x : r) x = wd(rng);
        auto p = TrajectoryProblem::with_zero_boundary(w, {{2, 4, 8}, {2, 4, 8}});
        const auto traj = solve_trajectory(IntervalVector(h), p);
        const auto rep = constraint_margins(traj, p.limits);
        if (!rep.feasible()) continue;
        const auto rows = sample_trajectory(traj.curves, 1000.0);
        for (const auto& r : rows) {
            for (std::size_t j = 0; j < 2; ++j) {
                CHECK(std::abs(r.velocity[j]) <= 2.0 * (1 + 1e-12));
                CHECK(std::abs(r.acceleration[j]) <= 4.0 * (1 + 1e-12));
                CHECK(std::abs(r.jerk[j]) <= 8.0 * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("velocity lower bounds") {
    auto p = TrajectoryProblem::with_zero_boundary({{0.0, 1.0, 4.0}}, {{1.0, 1, 1}});
    const auto lb = lower_bounds(p);
    CHECK(lb == std::vector<double>{0.5, 0.5, 1.5, 1.5});

    auto two = TrajectoryProblem::with_zero_boundary({{0.0, 3.0}, {0.0, -1.0}}, {{1.0, 1, 1}, {0.25, 1, 1}});
    for (double x : lower_bounds(two)) CHECK(x == doctest::Approx(4.0 / 3.0));

    auto five = TrajectoryProblem::with_zero_boundary({{0.0, 1.0, 3.0, 3.0, 2.0}}, {{2.0, 1, 1}});
    CHECK(lower_bounds(five) == std::vector<double>{0.25, 0.25, 1.0, 0.0, 0.25, 0.25});

    const auto box = search_box(five);
    CHECK(box.lower[3] == kPositivityFloor);
    CHECK(box.lower[2] == 1.0);
    CHECK(box.upper[2] == 20.0);
    CHECK(box.upper[0] == 20.0 * 0.25);
    CHECK(box.upper[3] == doctest::Approx(2.0));
}

TEST_CASE("candidate evaluation") {
    auto p = TrajectoryProblem::with_zero_boundary({{0.0, 1.0}}, {{10, 100, 1000}});
    const auto ok = evaluate_candidate(IntervalVector({1, 1, 1}), p);
    CHECK(ok.feasible);
    CHECK(ok.f_time == 3.0);
    CHECK(ok.f_jerk > 0.0);
    CHECK_FALSE(ok.degenerate);

    auto q = TrajectoryProblem::with_zero_boundary({{0.0, 1.0, 0.5, 2.0}}, {{1, 1, 1}});
    const auto bad = evaluate_candidate(IntervalVector({1.0, 1.0, 1e-12, 1.0, 1.0}), q);
    CHECK(bad.degenerate);
    CHECK_FALSE(bad.feasible);
    CHECK(std::isfinite(bad.violation));
    CHECK(bad.violation > 1e300);
}
