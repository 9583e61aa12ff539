#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hrvtraj/pareto.hpp"

namespace hrvtraj {

struct NsgaOptions {
    std::size_t population = 90;
    std::size_t generations = 200;
    std::uint64_t seed = 1;
    double crossover_probability = 0.9;
    double eta_crossover = 15.0;
    double eta_mutation = 20.0;
    /// Per-gene mutation probability; <= 0 selects 1/len(h).
    double mutation_probability = 0.0;
    /// Worker threads for objective evaluation; 1 evaluates inline.
    std::size_t threads = 1;
    /// Called once per evaluated candidate, sequentially, in evaluation order.
    std::function<void(const ObjectivePoint&)> on_evaluate;
};

/// Per-generation progress record. Generation 0 is the initial population.
struct GenerationStats {
    std::size_t generation = 0;
    std::size_t feasible = 0;
    std::size_t archive_size = 0;
    double best_violation = 0.0;
    /// Hypervolume of the archive w.r.t. NsgaResult::reference (0 until a
    /// feasible individual exists).
    double archive_hypervolume = 0.0;
    /// Hypervolume of the population's own feasible non-dominated members.
    double population_hypervolume = 0.0;
};

struct NsgaResult {
    /// Feasible non-dominated set over every surviving generation, sorted by
    /// ascending f_time.
    std::vector<ObjectivePoint> front;
    std::vector<ObjectivePoint> final_population;
    std::vector<GenerationStats> history;
    /// 1.1 x the largest objectives of the first feasible individuals seen.
    Objectives reference{0.0, 0.0};
};

/// Constrained bi-objective NSGA-II over interval vectors. Deterministic for
/// a given seed. Throws std::invalid_argument for an odd or tiny population
/// and OptimizationFailed when no feasible individual is ever found.
NsgaResult nsga2(const TrajectoryProblem& problem, const NsgaOptions& options = {});

}  // namespace hrvtraj
