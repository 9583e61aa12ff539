#pragma once

#include <cstddef>
#include <vector>

#include "hrvtraj/interpolation.hpp"

namespace hrvtraj {

/// f_time = D * sum(h).
double eval_time(const IntervalVector& h, std::size_t joints);

/// Integral of squared jerk of one solved curve, 3-point Gauss-Legendre per
/// knot span (exact for the piecewise quadratic jerk).
double squared_jerk_integral(const SplineCurve& position);

/// Sum over joints of the squared-jerk integral. Solves the interpolation
/// first, so degenerate h propagates DegenerateIntervalError.
double eval_jerk(const IntervalVector& h, const TrajectoryProblem& problem);
double eval_jerk(const JointTrajectory& trajectory);

/// Excess of one derivative control point over its bound.
struct ConstraintExcess {
    std::size_t joint = 0;
    int order = 0;        // 1 velocity, 2 acceleration, 3 jerk
    std::size_t index = 0;  // derivative control point index
    double value = 0.0;
    double bound = 0.0;
    double excess = 0.0;
};

struct ConstraintReport {
    double violation = 0.0;
    std::vector<ConstraintExcess> excesses;  // only entries with excess > 0
    /// max |c_{k,d}| / bound over all joints, per order 1..3.
    double max_ratio[3] = {0.0, 0.0, 0.0};

    bool feasible() const noexcept { return violation == 0.0; }
};

/// Convex-hull bounds on the velocity, acceleration and jerk control points.
ConstraintReport constraint_margins(const JointTrajectory& trajectory,
                                    const std::vector<JointLimits>& limits);

/// Minimum duration per interval from the velocity limits, before any
/// positivity floor. Gaps split by a virtual point share their bound evenly
/// across their sub-intervals.
std::vector<double> lower_bounds(const TrajectoryProblem& problem);

/// Box used by the evolutionary search.
struct SearchBox {
    std::vector<double> lower;
    std::vector<double> upper;
};

inline constexpr double kPositivityFloor = 1e-3;  // s
inline constexpr double kUpperBoundFactor = 20.0;
inline constexpr double kUpperReference = 0.1;  // s

/// lower = max(lb, floor); upper = factor * max(lb, reference).
SearchBox search_box(const TrajectoryProblem& problem);

/// One evaluated candidate.
struct ObjectivePoint {
    IntervalVector h;
    double f_time = 0.0;
    double f_jerk = 0.0;
    bool feasible = false;
    double violation = 0.0;
    /// Set when the interpolation system was degenerate for this h.
    bool degenerate = false;
};

/// Evaluates both objectives and the constraint violation. Degenerate
/// systems map to an infeasible point with the largest finite violation.
ObjectivePoint evaluate_candidate(const IntervalVector& h, const TrajectoryProblem& problem);

}  // namespace hrvtraj
