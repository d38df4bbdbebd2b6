#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "ecl/genome.hpp"
#include "ecl/rng.hpp"

namespace ecl {

// Two objectives, both minimized.
struct Fitness {
    double error_rate = 0.0;        // validation error on the current task
    std::int64_t param_count = 0;   // model size under the evaluation config

    bool operator==(const Fitness&) const = default;
};

// true iff a is no worse in both objectives and strictly better in one.
bool dominates(const Fitness& a, const Fitness& b);

struct Individual {
    ArchGenome genome;
    std::optional<Fitness> fitness;
    // Set by non-dominated sorting; rank r means member of front F_{r+1}.
    int rank = -1;
    double crowding = std::numeric_limits<double>::quiet_NaN();

    bool sorted() const { return rank >= 0; }
};

struct Population {
    std::vector<Individual> members;
    int capacity = 0;

    int size() const { return static_cast<int>(members.size()); }
};

// Fast non-dominated sort (Deb et al.). Returns fronts as index lists in
// ascending member order and writes ranks back. Throws StateError if any
// member lacks fitness.
std::vector<std::vector<int>> non_dominated_sort(std::vector<Individual>& members);

// NSGA-II crowding distance for one front, written into the members.
// Boundary members per objective get infinity; an objective with zero spread
// contributes nothing to interior members.
void crowding_distance(std::vector<Individual>& members, const std::vector<int>& front);

// Sort plus crowding for every front.
std::vector<std::vector<int>> assign_ranks_and_crowding(std::vector<Individual>& members);

// Draws two distinct members uniformly; lower rank wins, ties go to higher
// crowding, remaining ties to a coin flip. Returns the winner's index.
int binary_tournament(const Population& pop, Rng& rng);

// mu+lambda environmental selection: merge, re-sort, fill front by front,
// truncate the overflowing front by descending crowding (stable).
Population environmental_selection(const Population& parents,
                                   const std::vector<Individual>& offspring);

// Debug dump, one row per member: generation, member_id, error_rate,
// param_count, rank, crowding.
void append_fronts_csv(std::ostream& os, int generation, const std::vector<Individual>& members);

}  // namespace ecl
