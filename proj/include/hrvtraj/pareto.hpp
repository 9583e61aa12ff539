#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hrvtraj/objectives.hpp"

namespace hrvtraj {

using Objectives = std::array<double, 2>;  // (f_time, f_jerk)

/// Weak Pareto dominance: no worse in both, strictly better in one.
bool dominates(const Objectives& a, const Objectives& b) noexcept;

/// Feasible beats infeasible; two infeasible compare by violation; two
/// feasible compare by Pareto dominance.
bool constraint_dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept;

inline Objectives objectives_of(const ObjectivePoint& p) noexcept { return {p.f_time, p.f_jerk}; }

/// Fronts of indices under constraint domination, best first.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjectivePoint> pop);

/// Crowding distance of each member of one front (same order as `front`).
/// Boundary members get +infinity.
std::vector<double> crowding_distance(std::span<const ObjectivePoint> pop,
                                      std::span<const std::size_t> front);

/// Feasible, mutually non-dominated subset with duplicate objective vectors
/// removed, sorted by ascending f_time.
std::vector<ObjectivePoint> pareto_filter(std::span<const ObjectivePoint> points);

/// Area dominated by the points and bounded by the reference point.
/// Points not strictly better than the reference in both objectives add
/// nothing.
double hypervolume_2d(std::span<const Objectives> points, const Objectives& reference);

struct LadderEntry {
    IntervalVector h;
    double f_time = 0.0;
    double f_jerk = 0.0;
    bool feasible = true;

    double duration() const { return h.total(); }
};

/// Downsampled front ordered from minimum jerk (index 0) to minimum time.
struct SolutionLadder {
    std::vector<LadderEntry> entries;
    /// Set when the front held fewer unique members than requested.
    bool undersized = false;
    std::size_t requested = 0;

    std::size_t size() const noexcept { return entries.size(); }
};

inline constexpr double kAsfWeightFloor = 1e-6;
inline constexpr double kAsfAugmentation = 1e-4;

/// Augmented scalarization of normalized objectives for weights (time, jerk).
double asf(const Objectives& normalized, const Objectives& weights) noexcept;

/// Picks n front members with a sweep of ASF weight vectors over the
/// normalized front and orders them as a ladder. Throws
/// std::invalid_argument for an empty front or n == 0.
SolutionLadder downsample(std::span<const ObjectivePoint> front, std::size_t n = 15);

}  // namespace hrvtraj
