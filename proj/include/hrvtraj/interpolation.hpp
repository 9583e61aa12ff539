#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "hrvtraj/spline.hpp"

namespace hrvtraj {

/// Per-joint kinematic bounds (rad/s, rad/s^2, rad/s^3).
struct JointLimits {
    double v_max = 0.0;
    double a_max = 0.0;
    double j_max = 0.0;
};

/// Velocity, acceleration and jerk prescribed at one end of a joint motion.
struct EndConditions {
    double velocity = 0.0;
    double acceleration = 0.0;
    double jerk = 0.0;

    double order(int d) const { return d == 1 ? velocity : d == 2 ? acceleration : jerk; }
};

struct JointBoundary {
    EndConditions initial;
    EndConditions final;
};

/// Full planning input: waypoints per joint, limits and boundary conditions.
struct TrajectoryProblem {
    std::vector<std::string> joint_names;
    /// waypoints[j][l]: joint j at waypoint l (radians).
    std::vector<std::vector<double>> waypoints;
    std::vector<JointLimits> limits;
    std::vector<JointBoundary> boundary;

    std::size_t joints() const noexcept { return waypoints.size(); }
    std::size_t waypoint_count() const noexcept {
        return waypoints.empty() ? 0 : waypoints.front().size();
    }
    /// Length of the interval vector: W+1.
    std::size_t interval_count() const noexcept { return waypoint_count() + 1; }

    /// Throws InputError describing the first inconsistency.
    void validate() const;

    /// Builds a problem with zero boundary conditions and generated names.
    static TrajectoryProblem with_zero_boundary(std::vector<std::vector<double>> waypoints,
                                                std::vector<JointLimits> limits);
};

/// Zero-based knot indices at which the true waypoints are attained.
/// The point sequence w1, v1, w2, ..., w_{W-1}, v2, wW occupies knots
/// p .. W+p+1; the virtual points v1, v2 sit at p+1 and W+p.
std::vector<std::size_t> waypoint_knot_indices(std::size_t waypoint_count);

/// Interval indices (zero-based) that make up each waypoint gap. Gaps next
/// to a virtual point span two intervals (three when W = 2).
std::vector<std::vector<std::size_t>> gap_intervals(std::size_t waypoint_count);

/// Dense square system A * theta = B for one joint. A depends only on h.
struct InterpolationSystem {
    std::size_t size = 0;
    std::vector<double> matrix;  // row-major size x size
    std::vector<std::vector<double>> rhs;  // one right-hand side per joint

    double at(std::size_t r, std::size_t c) const { return matrix[r * size + c]; }
};

/// Row order: initial velocity, acceleration, jerk; final velocity,
/// acceleration, jerk; then one passage row per waypoint.
InterpolationSystem assemble_system(const IntervalVector& h, const TrajectoryProblem& problem);

/// Spline per joint over the shared clamped knot vector.
struct JointTrajectory {
    IntervalVector h;
    KnotVector knots;
    std::vector<SplineCurve> curves;
    /// Reciprocal condition-number estimate of the solved system.
    double rcond = 0.0;

    double duration() const { return knots.back(); }
};

/// Systems whose estimated condition number exceeds this are rejected.
inline constexpr double kMaxCondition = 1e12;

/// Solves the interpolation for every joint. Throws DegenerateIntervalError
/// when the system is singular or its condition exceeds kMaxCondition.
JointTrajectory solve_trajectory(const IntervalVector& h, const TrajectoryProblem& problem);

}  // namespace hrvtraj
