#include "ecl/moea.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ecl/errors.hpp"

namespace ecl {

namespace {

const Fitness& fitness_of(const Individual& ind) {
    if (!ind.fitness.has_value()) {
        throw StateError("individual has no fitness; evaluate before sorting/selection");
    }
    return *ind.fitness;
}

}  // namespace

bool dominates(const Fitness& a, const Fitness& b) {
    const bool no_worse = a.error_rate <= b.error_rate && a.param_count <= b.param_count;
    const bool better = a.error_rate < b.error_rate || a.param_count < b.param_count;
    return no_worse && better;
}

std::vector<std::vector<int>> non_dominated_sort(std::vector<Individual>& members) {
    const int n = static_cast<int>(members.size());
    std::vector<const Fitness*> fit(n);
    for (int i = 0; i < n; ++i) fit[i] = &fitness_of(members[i]);

    std::vector<std::vector<int>> dominated_by(n);
    std::vector<int> domination_count(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dominates(*fit[i], *fit[j])) {
                dominated_by[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(*fit[j], *fit[i])) {
                dominated_by[j].push_back(i);
                ++domination_count[i];
            }
        }
    }

    std::vector<std::vector<int>> fronts;
    std::vector<int> current;
    for (int i = 0; i < n; ++i) {
        if (domination_count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        for (int i : current) members[i].rank = static_cast<int>(fronts.size());
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated_by[i]) {
                if (--domination_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

void crowding_distance(std::vector<Individual>& members, const std::vector<int>& front) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (int i : front) members[i].crowding = 0.0;
    if (front.size() == 1) {
        members[front[0]].crowding = kInf;
        return;
    }
    const auto objective = [&](int idx, int obj) {
        const Fitness& f = fitness_of(members[idx]);
        return obj == 0 ? f.error_rate : static_cast<double>(f.param_count);
    };
    for (int obj = 0; obj < 2; ++obj) {
        std::vector<int> order(front);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return objective(a, obj) < objective(b, obj);
        });
        members[order.front()].crowding = kInf;
        members[order.back()].crowding = kInf;
        const double spread = objective(order.back(), obj) - objective(order.front(), obj);
        if (spread <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < order.size(); ++k) {
            members[order[k]].crowding +=
                (objective(order[k + 1], obj) - objective(order[k - 1], obj)) / spread;
        }
    }
}

std::vector<std::vector<int>> assign_ranks_and_crowding(std::vector<Individual>& members) {
    auto fronts = non_dominated_sort(members);
    for (const auto& front : fronts) crowding_distance(members, front);
    return fronts;
}

int binary_tournament(const Population& pop, Rng& rng) {
    const int n = pop.size();
    if (n < 2) {
        throw StateError("binary tournament needs a population of at least 2");
    }
    int a = static_cast<int>(rng.below(n));
    int b = static_cast<int>(rng.below(n - 1));
    if (b >= a) ++b;
    const Individual& ia = pop.members[a];
    const Individual& ib = pop.members[b];
    if (!ia.sorted() || !ib.sorted() || std::isnan(ia.crowding) || std::isnan(ib.crowding)) {
        throw StateError("binary tournament requires ranks and crowding to be assigned");
    }
    if (ia.rank != ib.rank) return ia.rank < ib.rank ? a : b;
    if (ia.crowding != ib.crowding) return ia.crowding > ib.crowding ? a : b;
    return rng.below(2) == 0 ? a : b;
}

Population environmental_selection(const Population& parents,
                                   const std::vector<Individual>& offspring) {
    std::vector<Individual> merged = parents.members;
    merged.insert(merged.end(), offspring.begin(), offspring.end());
    const auto fronts = assign_ranks_and_crowding(merged);

    Population next;
    next.capacity = parents.capacity;
    next.members.reserve(next.capacity);
    for (const auto& front : fronts) {
        const int room = next.capacity - next.size();
        if (room <= 0) break;
        if (static_cast<int>(front.size()) <= room) {
            for (int i : front) next.members.push_back(merged[i]);
            continue;
        }
        std::vector<int> order(front);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return merged[a].crowding > merged[b].crowding;
        });
        for (int k = 0; k < room; ++k) next.members.push_back(merged[order[k]]);
    }
    return next;
}

void append_fronts_csv(std::ostream& os, int generation, const std::vector<Individual>& members) {
    char buf[160];
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Individual& m = members[i];
        const Fitness f = m.fitness.value_or(Fitness{});
        std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%lld,%d,%.17g\n", generation, i,
                      f.error_rate, static_cast<long long>(f.param_count), m.rank, m.crowding);
        os << buf;
    }
}

}  // namespace ecl
