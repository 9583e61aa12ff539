#include "hrvtraj/interpolation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hrvtraj/errors.hpp"

namespace hrvtraj {

void TrajectoryProblem::validate() const {
    if (waypoints.empty()) throw InputError("problem has no joints");
    const std::size_t w = waypoints.front().size();
    if (w < 2) throw InputError("at least two waypoints are required, got " + std::to_string(w));
    for (std::size_t j = 0; j < waypoints.size(); ++j) {
        if (waypoints[j].size() != w) {
            throw InputError("joint " + std::to_string(j) + " has " +
                             std::to_string(waypoints[j].size()) + " waypoints, expected " +
                             std::to_string(w));
        }
        for (double v : waypoints[j]) {
            if (!std::isfinite(v)) throw InputError("non-finite waypoint on joint " + std::to_string(j));
        }
    }
    if (limits.size() != waypoints.size()) {
        throw InputError("limits given for " + std::to_string(limits.size()) + " joints, expected " +
                         std::to_string(waypoints.size()));
    }
    for (std::size_t j = 0; j < limits.size(); ++j) {
        const auto& l = limits[j];
        if (!(l.v_max > 0.0) || !(l.a_max > 0.0) || !(l.j_max > 0.0) || !std::isfinite(l.v_max) ||
            !std::isfinite(l.a_max) || !std::isfinite(l.j_max)) {
            throw InputError("limits of joint " + std::to_string(j) + " must be positive");
        }
    }
    if (boundary.size() != waypoints.size()) {
        throw InputError("boundary conditions given for " + std::to_string(boundary.size()) +
                         " joints, expected " + std::to_string(waypoints.size()));
    }
    if (!joint_names.empty() && joint_names.size() != waypoints.size()) {
        throw InputError("joint name count does not match joint count");
    }
}

TrajectoryProblem TrajectoryProblem::with_zero_boundary(std::vector<std::vector<double>> waypoints,
                                                        std::vector<JointLimits> limits) {
    TrajectoryProblem p;
    p.waypoints = std::move(waypoints);
    p.limits = std::move(limits);
    p.boundary.assign(p.waypoints.size(), JointBoundary{});
    for (std::size_t j = 0; j < p.waypoints.size(); ++j) p.joint_names.push_back("j" + std::to_string(j + 1));
    return p;
}

std::vector<std::size_t> waypoint_knot_indices(std::size_t waypoint_count) {
    if (waypoint_count < 2) throw std::invalid_argument("at least two waypoints are required");
    const std::size_t p = kQuinticDegree;
    std::vector<std::size_t> idx;
    idx.reserve(waypoint_count);
    idx.push_back(p);
    // Interior waypoints w_2..w_{W-1} follow the first virtual point.
    for (std::size_t l = 1; l + 1 < waypoint_count; ++l) idx.push_back(p + l + 1);
    idx.push_back(waypoint_count + p + 1);
    return idx;
}

std::vector<std::vector<std::size_t>> gap_intervals(std::size_t waypoint_count) {
    if (waypoint_count < 2) throw std::invalid_argument("at least two waypoints are required");
    if (waypoint_count == 2) return {{0, 1, 2}};
    std::vector<std::vector<std::size_t>> gaps;
    gaps.push_back({0, 1});
    for (std::size_t g = 1; g + 2 < waypoint_count; ++g) gaps.push_back({g + 1});
    gaps.push_back({waypoint_count - 1, waypoint_count});
    return gaps;
}

InterpolationSystem assemble_system(const IntervalVector& h, const TrajectoryProblem& problem) {
    const std::size_t w = problem.waypoint_count();
    if (h.size() != w + 1) {
        throw InputError("interval vector has " + std::to_string(h.size()) +
                                    " entries, expected " + std::to_string(w + 1));
    }
    const KnotVector knots = KnotVector::clamped(h, kQuinticDegree);
    const std::size_t n = knots.basis_count();  // W + 6

    InterpolationSystem sys;
    sys.size = n;
    sys.matrix.assign(n * n, 0.0);
    auto row = [&](std::size_t r) { return sys.matrix.begin() + static_cast<std::ptrdiff_t>(r * n); };

    std::size_t r = 0;
    std::array<std::vector<std::vector<double>>, 3> ops;
    for (int d = 1; d <= 3; ++d) ops[d - 1] = derivative_operator(knots, d);
    for (int d = 1; d <= 3; ++d) {
        std::copy(ops[d - 1].front().begin(), ops[d - 1].front().end(), row(r++));
    }
    for (int d = 1; d <= 3; ++d) {
        std::copy(ops[d - 1].back().begin(), ops[d - 1].back().end(), row(r++));
    }

    const auto wk = waypoint_knot_indices(w);
    const auto p = static_cast<std::size_t>(knots.degree());
    for (std::size_t idx : wk) {
        const double t = knots[idx];
        const std::size_t span = knots.find_span(t);
        const auto vals = nonzero_basis(span, t, knots);
        auto it = row(r++);
        for (std::size_t k = 0; k <= p; ++k) it[static_cast<std::ptrdiff_t>(span - p + k)] = vals[k];
    }

    sys.rhs.reserve(problem.joints());
    for (std::size_t j = 0; j < problem.joints(); ++j) {
        const auto& bc = problem.boundary[j];
        std::vector<double> b;
        b.reserve(n);
        for (int d = 1; d <= 3; ++d) b.push_back(bc.initial.order(d));
        for (int d = 1; d <= 3; ++d) b.push_back(bc.final.order(d));
        b.insert(b.end(), problem.waypoints[j].begin(), problem.waypoints[j].end());
        sys.rhs.push_back(std::move(b));
    }
    return sys;
}

namespace {

std::string describe(const IntervalVector& h) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? ", " : "") << h[i];
    os << "]";
    return os.str();
}

}  // namespace

JointTrajectory solve_trajectory(const IntervalVector& h, const TrajectoryProblem& problem) {
    const auto sys = assemble_system(h, problem);
    const auto n = static_cast<Eigen::Index>(sys.size);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        sys.matrix.data(), n, n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond * kMaxCondition >= 1.0)) {
        throw DegenerateIntervalError("degenerate interval vector h=" + describe(h) +
                                          ": interpolation system condition estimate " +
                                          std::to_string(rcond > 0.0 ? 1.0 / rcond : INFINITY),
                                      rcond > 0.0 ? 1.0 / rcond : INFINITY);
    }

    JointTrajectory out;
    out.h = h;
    out.knots = KnotVector::clamped(h, kQuinticDegree);
    out.rcond = rcond;
    out.curves.reserve(problem.joints());
    for (const auto& b : sys.rhs) {
        Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
        Eigen::VectorXd theta = lu.solve(rhs);
        if (!theta.allFinite()) {
            throw DegenerateIntervalError("non-finite control points for h=" + describe(h), INFINITY);
        }
        out.curves.emplace_back(out.knots, std::vector<double>(theta.data(), theta.data() + n));
    }
    return out;
}

}  // namespace hrvtraj
