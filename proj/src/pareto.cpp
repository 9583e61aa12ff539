#include "hrvtraj/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hrvtraj {

bool dominates(const Objectives& a, const Objectives& b) noexcept {
    return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

bool constraint_dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept {
    if (a.feasible != b.feasible) return a.feasible;
    if (!a.feasible) return a.violation < b.violation;
    return dominates(objectives_of(a), objectives_of(b));
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjectivePoint> pop) {
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (constraint_dominates(pop[i], pop[j])) {
                dominated[i].push_back(j);
                ++count[j];
            } else if (constraint_dominates(pop[j], pop[i])) {
                dominated[j].push_back(i);
                ++count[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] == 0) fronts[0].push_back(i);
    for (std::size_t f = 0; !fronts[f].empty(); ++f) {
        std::vector<std::size_t> next;
        for (std::size_t i : fronts[f]) {
            for (std::size_t j : dominated[i]) {
                if (--count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectivePoint> pop,
                                      std::span<const std::size_t> front) {
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (int m = 0; m < 2; ++m) {
        auto value = [&](std::size_t i) { return objectives_of(pop[front[i]])[m]; };
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
        dist[order.front()] = dist[order.back()] = std::numeric_limits<double>::infinity();
        const double range = value(order.back()) - value(order.front());
        if (!(range > 0.0) || !std::isfinite(range)) continue;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / range;
        }
    }
    return dist;
}

std::vector<ObjectivePoint> pareto_filter(std::span<const ObjectivePoint> points) {
    std::vector<const ObjectivePoint*> feas;
    for (const auto& p : points)
        if (p.feasible) feas.push_back(&p);
    std::stable_sort(feas.begin(), feas.end(), [](const auto* a, const auto* b) {
        return a->f_time < b->f_time || (a->f_time == b->f_time && a->f_jerk < b->f_jerk);
    });
    // Sweep by ascending time: keep points with strictly smaller jerk.
    std::vector<ObjectivePoint> out;
    double best_jerk = std::numeric_limits<double>::infinity();
    for (const auto* p : feas) {
        if (p->f_jerk < best_jerk) {
            out.push_back(*p);
            best_jerk = p->f_jerk;
        }
    }
    return out;
}

double hypervolume_2d(std::span<const Objectives> points, const Objectives& reference) {
    std::vector<Objectives> pts;
    for (const auto& p : points)
        if (p[0] < reference[0] && p[1] < reference[1]) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double ceiling = reference[1];
    for (const auto& p : pts) {
        if (p[1] < ceiling) {
            area += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    return area;
}

double asf(const Objectives& normalized, const Objectives& weights) noexcept {
    double worst = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double v = normalized[i] / std::max(weights[i], kAsfWeightFloor);
        worst = std::max(worst, v);
        sum += v;
    }
    return worst + kAsfAugmentation * sum;
}

SolutionLadder downsample(std::span<const ObjectivePoint> front, std::size_t n) {
    if (front.empty()) throw std::invalid_argument("cannot downsample an empty front");
    if (n == 0) throw std::invalid_argument("ladder size must be positive");

    const auto members = pareto_filter(front);
    if (members.empty()) throw std::invalid_argument("front has no feasible member");

    Objectives ideal{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Objectives nadir{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& m : members) {
        const auto f = objectives_of(m);
        for (int i = 0; i < 2; ++i) {
            ideal[i] = std::min(ideal[i], f[i]);
            nadir[i] = std::max(nadir[i], f[i]);
        }
    }
    std::vector<Objectives> norm;
    norm.reserve(members.size());
    for (const auto& m : members) {
        const auto f = objectives_of(m);
        Objectives v{};
        for (int i = 0; i < 2; ++i) {
            const double range = nadir[i] - ideal[i];
            v[i] = range > 0.0 ? (f[i] - ideal[i]) / range : 0.0;
        }
        norm.push_back(v);
    }

    SolutionLadder ladder;
    ladder.requested = n;
    const std::size_t take = std::min(n, members.size());
    ladder.undersized = take < n;

    std::vector<bool> chosen(members.size(), false);
    std::vector<std::size_t> picks;
    for (std::size_t m = 0; m < take; ++m) {
        const double frac = take == 1 ? 0.0 : static_cast<double>(m) / static_cast<double>(take - 1);
        const Objectives w{frac, 1.0 - frac};
        std::size_t best = 0;
        double best_val = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < members.size(); ++i) {
            const double v = asf(norm[i], w);
            if (v < best_val) {
                best_val = v;
                best = i;
            }
        }
        if (chosen[best]) {
            // Nearest unselected member in normalized objective space.
            double best_d = std::numeric_limits<double>::infinity();
            std::size_t alt = best;
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (chosen[i]) continue;
                const double dx = norm[i][0] - norm[best][0], dy = norm[i][1] - norm[best][1];
                const double d = dx * dx + dy * dy;
                if (d < best_d) {
                    best_d = d;
                    alt = i;
                }
            }
            best = alt;
        }
        chosen[best] = true;
        picks.push_back(best);
    }

    // Ladder order: min-jerk first, i.e. descending time.
    std::sort(picks.begin(), picks.end(), [&](std::size_t a, std::size_t b) {
        return members[a].f_time > members[b].f_time;
    });
    for (std::size_t i : picks) {
        const auto& m = members[i];
        ladder.entries.push_back({m.h, m.f_time, m.f_jerk, m.feasible});
    }
    return ladder;
}

}  // namespace hrvtraj
