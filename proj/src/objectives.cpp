#include "hrvtraj/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hrvtraj/errors.hpp"

namespace hrvtraj {

double eval_time(const IntervalVector& h, std::size_t joints) {
    return static_cast<double>(joints) * h.total();
}

double squared_jerk_integral(const SplineCurve& position) {
    const SplineCurve jerk = position.derivative(3);
    const KnotVector& knots = position.knots();
    // Gauss-Legendre nodes and weights on [-1, 1].
    static const double node = std::sqrt(3.0 / 5.0);
    static const double nodes[3] = {-node, 0.0, node};
    static const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], b = knots[i + 1];
        if (!(b > a)) continue;
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double span = 0.0;
        for (int q = 0; q < 3; ++q) {
            const double v = jerk.evaluate(mid + half * nodes[q]);
            span += weights[q] * v * v;
        }
        total += half * span;
    }
    return total;
}

double eval_jerk(const JointTrajectory& trajectory) {
    double total = 0.0;
    for (const auto& c : trajectory.curves) total += squared_jerk_integral(c);
    return total;
}

double eval_jerk(const IntervalVector& h, const TrajectoryProblem& problem) {
    return eval_jerk(solve_trajectory(h, problem));
}

ConstraintReport constraint_margins(const JointTrajectory& trajectory,
                                    const std::vector<JointLimits>& limits) {
    if (limits.size() != trajectory.curves.size()) {
        throw std::invalid_argument("limit count does not match joint count");
    }
    ConstraintReport report;
    for (std::size_t j = 0; j < trajectory.curves.size(); ++j) {
        const auto& curve = trajectory.curves[j];
        const double bounds[3] = {limits[j].v_max, limits[j].a_max, limits[j].j_max};
        for (int d = 1; d <= 3; ++d) {
            const auto cp = derivative_control_points(curve.control_points(), curve.knots(), d);
            for (std::size_t k = 0; k < cp.size(); ++k) {
                const double mag = std::abs(cp[k]);
                report.max_ratio[d - 1] = std::max(report.max_ratio[d - 1], mag / bounds[d - 1]);
                const double excess = mag - bounds[d - 1];
                if (excess > 0.0) {
                    report.violation += excess;
                    report.excesses.push_back({j, d, k, cp[k], bounds[d - 1], excess});
                }
            }
        }
    }
    return report;
}

std::vector<double> lower_bounds(const TrajectoryProblem& problem) {
    const std::size_t w = problem.waypoint_count();
    std::vector<double> lb(w + 1, 0.0);
    const auto gaps = gap_intervals(w);
    for (std::size_t g = 0; g < gaps.size(); ++g) {
        double bound = 0.0;
        for (std::size_t j = 0; j < problem.joints(); ++j) {
            const double dist = std::abs(problem.waypoints[j][g + 1] - problem.waypoints[j][g]);
            bound = std::max(bound, dist / problem.limits[j].v_max);
        }
        const double share = bound / static_cast<double>(gaps[g].size());
        for (std::size_t l : gaps[g]) lb[l] = share;
    }
    return lb;
}

SearchBox search_box(const TrajectoryProblem& problem) {
    SearchBox box;
    for (double lb : lower_bounds(problem)) {
        box.lower.push_back(std::max(lb, kPositivityFloor));
        box.upper.push_back(kUpperBoundFactor * std::max(lb, kUpperReference));
    }
    return box;
}

ObjectivePoint evaluate_candidate(const IntervalVector& h, const TrajectoryProblem& problem) {
    ObjectivePoint pt;
    pt.h = h;
    pt.f_time = eval_time(h, problem.joints());
    try {
        const auto traj = solve_trajectory(h, problem);
        pt.f_jerk = eval_jerk(traj);
        pt.violation = constraint_margins(traj, problem.limits).violation;
        if (!std::isfinite(pt.f_jerk) || !std::isfinite(pt.violation)) {
            pt.degenerate = true;
        }
    } catch (const DegenerateIntervalError&) {
        pt.degenerate = true;
    }
    if (pt.degenerate) {
        pt.f_jerk = std::numeric_limits<double>::max();
        pt.violation = std::numeric_limits<double>::max();
    }
    pt.feasible = pt.violation == 0.0;
    return pt;
}

}  // namespace hrvtraj
