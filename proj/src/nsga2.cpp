#include "hrvtraj/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "hrvtraj/errors.hpp"
#include "hrvtraj/random.hpp"

namespace hrvtraj {
namespace {

struct Ranked {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

Ranked rank_population(const std::vector<ObjectivePoint>& pop) {
    Ranked r;
    r.rank.assign(pop.size(), 0);
    r.crowding.assign(pop.size(), 0.0);
    const auto fronts = non_dominated_sort(pop);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        const auto cd = crowding_distance(pop, fronts[f]);
        for (std::size_t i = 0; i < fronts[f].size(); ++i) {
            r.rank[fronts[f][i]] = f;
            r.crowding[fronts[f][i]] = cd[i];
        }
    }
    return r;
}

// Simulated binary crossover with bounds (Deb & Agrawal).
void sbx(std::vector<double>& a, std::vector<double>& b, const SearchBox& box, double eta,
         Rng& rng) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (rng.uniform() > 0.5) continue;
        const double lo = box.lower[i], hi = box.upper[i];
        if (std::abs(a[i] - b[i]) <= 1e-14) continue;
        const double y1 = std::min(a[i], b[i]), y2 = std::max(a[i], b[i]);
        const double rand = rng.uniform();

        auto betaq = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            if (rand <= 1.0 / alpha) return std::pow(rand * alpha, 1.0 / (eta + 1.0));
            return std::pow(1.0 / (2.0 - rand * alpha), 1.0 / (eta + 1.0));
        };
        double c1 = 0.5 * ((y1 + y2) - betaq(1.0 + 2.0 * (y1 - lo) / (y2 - y1)) * (y2 - y1));
        double c2 = 0.5 * ((y1 + y2) + betaq(1.0 + 2.0 * (hi - y2) / (y2 - y1)) * (y2 - y1));
        c1 = std::clamp(c1, lo, hi);
        c2 = std::clamp(c2, lo, hi);
        if (rng.uniform() <= 0.5) std::swap(c1, c2);
        a[i] = c1;
        b[i] = c2;
    }
}

// Polynomial mutation with bounds.
void mutate(std::vector<double>& x, const SearchBox& box, double eta, double prob, Rng& rng) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (rng.uniform() > prob) continue;
        const double lo = box.lower[i], hi = box.upper[i];
        const double range = hi - lo;
        if (!(range > 0.0)) continue;
        const double d1 = (x[i] - lo) / range, d2 = (hi - x[i]) / range;
        const double r = rng.uniform();
        const double power = 1.0 / (eta + 1.0);
        double dq;
        if (r < 0.5) {
            const double v = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, eta + 1.0);
            dq = std::pow(v, power) - 1.0;
        } else {
            const double v = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d2, eta + 1.0);
            dq = 1.0 - std::pow(v, power);
        }
        x[i] = std::clamp(x[i] + dq * range, lo, hi);
    }
}

std::vector<ObjectivePoint> evaluate_all(const std::vector<std::vector<double>>& genes,
                                         const TrajectoryProblem& problem,
                                         const NsgaOptions& opt) {
    std::vector<ObjectivePoint> out(genes.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = evaluate_candidate(IntervalVector(genes[i]), problem);
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(opt.threads, genes.size()));
    if (threads == 1) {
        work(0, genes.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (genes.size() + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk, e = std::min(genes.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
    }
    if (opt.on_evaluate)
        for (const auto& p : out) opt.on_evaluate(p);
    return out;
}

// Inserts feasible points into a mutually non-dominated archive.
void update_archive(std::vector<ObjectivePoint>& archive, const std::vector<ObjectivePoint>& pop) {
    for (const auto& p : pop) {
        if (!p.feasible) continue;
        const auto f = objectives_of(p);
        bool rejected = false;
        for (const auto& a : archive) {
            const auto g = objectives_of(a);
            if (dominates(g, f) || g == f) {
                rejected = true;
                break;
            }
        }
        if (rejected) continue;
        std::erase_if(archive, [&](const ObjectivePoint& a) { return dominates(f, objectives_of(a)); });
        archive.push_back(p);
    }
}

std::vector<Objectives> objective_list(const std::vector<ObjectivePoint>& pts) {
    std::vector<Objectives> out;
    for (const auto& p : pts)
        if (p.feasible) out.push_back(objectives_of(p));
    return out;
}

}  // namespace

NsgaResult nsga2(const TrajectoryProblem& problem, const NsgaOptions& opt) {
    problem.validate();
    if (opt.population < 4 || opt.population % 2 != 0) {
        throw std::invalid_argument("population must be even and at least 4, got " +
                                    std::to_string(opt.population));
    }
    const SearchBox box = search_box(problem);
    const std::size_t dim = box.lower.size();
    const double pm = opt.mutation_probability > 0.0 ? opt.mutation_probability
                                                     : 1.0 / static_cast<double>(dim);
    Rng rng(opt.seed);

    std::vector<std::vector<double>> genes(opt.population, std::vector<double>(dim));
    for (auto& g : genes)
        for (std::size_t i = 0; i < dim; ++i) g[i] = box.lower[i] + rng.uniform() * (box.upper[i] - box.lower[i]);
    std::vector<ObjectivePoint> pop = evaluate_all(genes, problem, opt);

    NsgaResult result;
    std::vector<ObjectivePoint> archive;
    bool have_reference = false;

    auto record = [&](std::size_t gen) {
        update_archive(archive, pop);
        GenerationStats s;
        s.generation = gen;
        s.best_violation = std::numeric_limits<double>::max();
        for (const auto& p : pop) {
            s.feasible += p.feasible ? 1 : 0;
            s.best_violation = std::min(s.best_violation, p.violation);
        }
        if (!have_reference && !archive.empty()) {
            Objectives worst{0.0, 0.0};
            for (const auto& p : pop) {
                if (!p.feasible) continue;
                worst[0] = std::max(worst[0], p.f_time);
                worst[1] = std::max(worst[1], p.f_jerk);
            }
            result.reference = {1.1 * worst[0], 1.1 * worst[1]};
            have_reference = true;
        }
        s.archive_size = archive.size();
        if (have_reference) {
            const auto a = objective_list(archive);
            s.archive_hypervolume = hypervolume_2d(a, result.reference);
            const auto pf = pareto_filter(pop);
            s.population_hypervolume = hypervolume_2d(objective_list(pf), result.reference);
        }
        result.history.push_back(s);
    };
    record(0);

    for (std::size_t gen = 1; gen <= opt.generations; ++gen) {
        const Ranked ranked = rank_population(pop);
        auto better = [&](std::size_t a, std::size_t b) {
            if (ranked.rank[a] != ranked.rank[b]) return ranked.rank[a] < ranked.rank[b] ? a : b;
            if (ranked.crowding[a] != ranked.crowding[b]) return ranked.crowding[a] > ranked.crowding[b] ? a : b;
            return rng.uniform() < 0.5 ? a : b;
        };
        auto tournament = [&]() {
            const std::size_t a = rng.index(pop.size());
            const std::size_t b = rng.index(pop.size());
            return better(a, b);
        };

        std::vector<std::vector<double>> children;
        children.reserve(opt.population);
        while (children.size() < opt.population) {
            const std::size_t pa = tournament();
            const std::size_t pb = tournament();
            auto ca = std::vector<double>(pop[pa].h.values().begin(), pop[pa].h.values().end());
            auto cb = std::vector<double>(pop[pb].h.values().begin(), pop[pb].h.values().end());
            if (rng.uniform() <= opt.crossover_probability) sbx(ca, cb, box, opt.eta_crossover, rng);
            mutate(ca, box, opt.eta_mutation, pm, rng);
            mutate(cb, box, opt.eta_mutation, pm, rng);
            children.push_back(std::move(ca));
            children.push_back(std::move(cb));
        }
        auto offspring = evaluate_all(children, problem, opt);

        // Elitist (mu + lambda) survival.
        std::vector<ObjectivePoint> merged = std::move(pop);
        merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                      std::make_move_iterator(offspring.end()));
        const auto fronts = non_dominated_sort(merged);
        std::vector<ObjectivePoint> next;
        next.reserve(opt.population);
        for (const auto& front : fronts) {
            if (next.size() + front.size() <= opt.population) {
                for (std::size_t i : front) next.push_back(merged[i]);
                continue;
            }
            const auto cd = crowding_distance(merged, front);
            std::vector<std::size_t> order(front.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
            for (std::size_t k = 0; next.size() < opt.population; ++k) next.push_back(merged[front[order[k]]]);
            break;
        }
        pop = std::move(next);
        record(gen);
    }

    if (archive.empty()) {
        double best = std::numeric_limits<double>::max();
        for (const auto& s : result.history) best = std::min(best, s.best_violation);
        throw OptimizationFailed("no feasible interval vector found; best violation " +
                                     std::to_string(best),
                                 best);
    }
    std::sort(archive.begin(), archive.end(),
              [](const auto& a, const auto& b) { return a.f_time < b.f_time; });
    result.front = std::move(archive);
    result.final_population = std::move(pop);
    return result;
}

}  // namespace hrvtraj
