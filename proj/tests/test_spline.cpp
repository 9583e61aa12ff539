#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hrvtraj/spline.hpp"
#include "oracles.hpp"

using namespace hrvtraj;

namespace {

SplineCurve random_quintic(std::mt19937_64& rng, std::size_t intervals) {
    std::uniform_real_distribution<double> hd(0.2, 2.0), cd(-2.0, 2.0);
    std::vector<double> h(intervals);
    for (auto& x : h) x = hd(rng);
    auto knots = KnotVector::clamped(IntervalVector(h));
    std::vector<double> cp(knots.basis_count());
    for (auto& c : cp) c = cd(rng);
    return SplineCurve(knots, cp);
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("basis: degree-zero indicator") {
    KnotVector u({0, 1, 2, 3}, 0);
    // Second basis function, [1, 2).
    CHECK(basis(1, 0, 1.5, u) == 1.0);
    CHECK(basis(0, 0, 1.5, u) == 0.0);
    CHECK(basis(1, 0, 2.0, u) == 0.0);
}

TEST_CASE("basis: quadratic uniform value matches hand expansion") {
    KnotVector u({0, 1, 2, 3, 4, 5, 6}, 2);
    // N_{0,0}(1) = 0, N_{1,0}(1) = 1; N_{0,1}(1) = (2-1)/1 * 1 = 1;
    // N_{0,2}(1) = (1-0)/2 * N_{0,1}(1) + (3-1)/2 * N_{1,1}(1) = 0.5 + 0.
    CHECK(basis(0, 2, 1.0, u) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("basis: errors") {
    KnotVector u({0, 1, 2, 3, 4, 5, 6}, 2);
    CHECK_THROWS_AS(basis(4, 2, 1.0, u), std::invalid_argument);
    CHECK_THROWS_AS(basis(0, 2, 6.5, u), std::invalid_argument);
}

TEST_CASE("basis: partition of unity, non-negativity and local support") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto curve = random_quintic(rng, 3 + trial % 7);
        const auto& u = curve.knots();
        std::uniform_real_distribution<double> td(u.front(), u.back());
        for (int s = 0; s < 50; ++s) {
            const double t = s == 0 ? u.back() : td(rng);
            double sum = 0.0;
            for (std::size_t k = 0; k < u.basis_count(); ++k) {
                const double n = basis(k, 5, t, u);
                CHECK(n >= 0.0);
                if (t < u[k] || t > u[k + 6]) CHECK(n == 0.0);
                sum += n;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("basis matches the recursive Cox-de Boor oracle") {
    std::mt19937_64 rng(3);
    const auto curve = random_quintic(rng, 6);
    const auto& u = curve.knots();
    std::vector<double> raw(u.values().begin(), u.values().end());
    std::uniform_real_distribution<double> td(u.front(), u.back());
    for (int s = 0; s < 100; ++s) {
        const double t = td(rng);
        for (std::size_t k = 0; k < u.basis_count(); ++k) {
            CHECK(basis(k, 5, t, u) == doctest::Approx(oracle::cox_de_boor(raw, k, 5, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("clamped knot construction") {
    auto k = KnotVector::clamped(IntervalVector({1, 1, 1, 1}));
    std::vector<double> expect{0, 0, 0, 0, 0, 0, 1, 2, 3, 4, 4, 4, 4, 4, 4};
    CHECK(k.size() == 15);
    CHECK(std::vector<double>(k.values().begin(), k.values().end()) == expect);

    auto k2 = KnotVector::clamped(IntervalVector({0.5, 1.0, 0.5}));
    std::vector<double> expect2{0, 0, 0, 0, 0, 0, 0.5, 1.5, 2, 2, 2, 2, 2, 2};
    CHECK(std::vector<double>(k2.values().begin(), k2.values().end()) == expect2);

    IntervalVector h({0.1, 0.7, 0.3, 0.9});
    CHECK(KnotVector::clamped(h).back() == h.total());
    CHECK(KnotVector::clamped(IntervalVector(std::vector<double>(8, 0.3))).size() == 7 + 12);
}

TEST_CASE("interval vector rejects non-positive spacings") {
    CHECK_THROWS_AS(IntervalVector({1.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(IntervalVector({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("derivative control points") {
    auto knots = KnotVector::clamped(IntervalVector({0.4, 1.1, 0.7, 0.9}));
    std::vector<double> constant(knots.basis_count(), 2.5);
    for (int d = 1; d <= 5; ++d) {
        for (double c : derivative_control_points(constant, knots, d)) CHECK(c == 0.0);
    }
    CHECK_THROWS_AS(derivative_control_points(constant, knots, 6), std::invalid_argument);

    std::mt19937_64 rng(5);
    const auto curve = random_quintic(rng, 5);
    const auto once = derivative_control_points(curve.control_points(), curve.knots(), 1);
    const auto twice = derivative_control_points(once, curve.knots().derivative(1), 1);
    const auto direct = derivative_control_points(curve.control_points(), curve.knots(), 2);
    REQUIRE(twice.size() == direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) CHECK(twice[i] == doctest::Approx(direct[i]).epsilon(1e-13));
}

TEST_CASE("first derivative matches central differences of position") {
    std::mt19937_64 rng(17);
    const auto curve = random_quintic(rng, 6);
    const auto vel = curve.derivative(1);
    const double scale = max_abs(vel.control_points());
    std::uniform_real_distribution<double> td(curve.start() + 0.01, curve.end() - 0.01);
    const double step = 1e-5;
    for (int s = 0; s < 100; ++s) {
        const double t = td(rng);
        const double fd = (curve.evaluate(t + step) - curve.evaluate(t - step)) / (2 * step);
        const double v = vel.evaluate(t);
        CHECK(std::abs(v - fd) <= 1e-6 * std::max(std::abs(fd), scale));
    }
}

TEST_CASE("third derivative matches finite differences of position") {
    std::mt19937_64 rng(23);
    const auto curve = random_quintic(rng, 5);
    const double scale = max_abs(curve.derivative(3).control_points());
    std::uniform_real_distribution<double> td(curve.start() + 0.05, curve.end() - 0.05);
    const double s = 2e-3;
    for (int i = 0; i < 50; ++i) {
        const double t = td(rng);
        auto q = [&](double x) { return curve.evaluate(x); };
        // Fourth-order accurate central stencil for the third derivative.
        const double fd = (-q(t + 3 * s) + 8 * q(t + 2 * s) - 13 * q(t + s) + 13 * q(t - s) - 8 * q(t - 2 * s) +
                           q(t - 3 * s)) /
                          (8 * s * s * s);
        CHECK(std::abs(curve.evaluate_derivative(t, 3) - fd) <= 1e-5 * std::max(std::abs(fd), scale));
    }
}

TEST_CASE("evaluation: clamped endpoints, domain and convex hull") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const auto curve = random_quintic(rng, 4 + trial);
        const auto cp = curve.control_points();
        CHECK(curve.evaluate(0.0) == doctest::Approx(cp.front()).epsilon(1e-15));
        CHECK(curve.evaluate(curve.end()) == doctest::Approx(cp.back()).epsilon(1e-15));
        const double lo = *std::min_element(cp.begin(), cp.end());
        const double hi = *std::max_element(cp.begin(), cp.end());
        std::uniform_real_distribution<double> td(curve.start(), curve.end());
        for (int s = 0; s < 200; ++s) {
            const double v = curve.evaluate(td(rng));
            CHECK(v >= lo - 1e-14);
            CHECK(v <= hi + 1e-14);
        }
    }
    const auto curve = random_quintic(rng, 3);
    CHECK_THROWS_AS(curve.evaluate(-1e-9), std::invalid_argument);
    CHECK_THROWS_AS(curve.evaluate(curve.end() + 1e-9), std::invalid_argument);
}

TEST_CASE("evaluation matches the oracle sum of basis functions") {
    std::mt19937_64 rng(31);
    const auto curve = random_quintic(rng, 7);
    std::vector<double> raw(curve.knots().values().begin(), curve.knots().values().end());
    std::vector<double> cp(curve.control_points().begin(), curve.control_points().end());
    std::uniform_real_distribution<double> td(curve.start(), curve.end());
    for (int s = 0; s < 50; ++s) {
        const double t = td(rng);
        for (int d = 0; d <= 3; ++d) {
            const double want = oracle::curve(raw, 5, cp, t, d);
            CHECK(curve.evaluate_derivative(t, d) == doctest::Approx(want).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("smoothness across interior knots up to the fourth derivative") {
    std::mt19937_64 rng(37);
    const auto curve = random_quintic(rng, 6);
    const auto& u = curve.knots();
    for (std::size_t i = 6; i + 6 < u.size(); ++i) {
        const double t = u[i];
        for (int d = 0; d <= 4; ++d) {
            const auto der = curve.derivative(d);
            const double eps = 1e-10;
            const double left = der.evaluate(t - eps), right = der.evaluate(t + eps);
            const double scale = std::max(1.0, max_abs(der.control_points()));
            CHECK(std::abs(left - right) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("sample_trajectory") {
    SplineCurve flat(KnotVector::clamped(IntervalVector({0.25, 0.5, 0.25})), std::vector<double>(8, 0.7));
    std::vector<SplineCurve> curves{flat};
    const auto rows = sample_trajectory(curves, 500.0);
    CHECK(rows.size() == 501);
    CHECK(rows.front().t == 0.0);
    CHECK(rows.back().t == 1.0);
    for (const auto& r : rows) {
        CHECK(r.velocity[0] == 0.0);
        CHECK(r.position[0] == doctest::Approx(0.7));
    }

    std::mt19937_64 rng(41);
    const auto c1 = random_quintic(rng, 4);
    std::vector<double> cp2(c1.control_points().size());
    for (auto& c : cp2) c = std::uniform_real_distribution<double>(-1, 1)(rng);
    SplineCurve c2(c1.knots(), cp2);
    std::vector<SplineCurve> both{c1, c2};
    const auto rows2 = sample_trajectory(both, 37.0);
    CHECK(rows2.back().t == c1.end());
    for (std::size_t i = 0; i < rows2.size(); i += 7) {
        const double t = rows2[i].t;
        CHECK(rows2[i].position[1] == c2.evaluate(t));
        CHECK(rows2[i].acceleration[0] == c1.evaluate_derivative(t, 2));
        CHECK(rows2[i].jerk[1] == c2.evaluate_derivative(t, 3));
    }
    CHECK_THROWS_AS(sample_trajectory(both, 0.0), std::invalid_argument);
}
