#pragma once

#include "dpres/graph.hpp"
#include "dpres/result.hpp"

namespace dpres {

struct BruteOptions {
    std::size_t candidate_cap = 30;
    // false enumerates subsets of all of E(G) instead of the shortest-path edge union
    bool restrict_to_union = true;
};

// Enumerates candidate subsets by increasing size, lexicographically within a size,
// and returns the first preserver found. Throws SizeCapError above the cap.
SolveResult brute_force_min(const Instance& inst, const BruteOptions& options = {});

// Branch and bound over the shortest-path edge union. Chains of degree-2
// non-terminal vertices are decided as one unit. Throws TimeoutError past the limit.
SolveResult bb_min(const Instance& inst, const SearchLimits& limits = {});

// One BFS shortest path per pair, pruned to a minimal preserver.
Preserver greedy_preserver(const Instance& inst);

} // namespace dpres
