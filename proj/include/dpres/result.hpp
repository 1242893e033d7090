#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>

#include "dpres/graph.hpp"

namespace dpres {

struct SolveStats {
    std::uint64_t nodes = 0;      // search-tree nodes
    std::uint64_t candidates = 0; // complete candidate subgraphs checked
    std::uint64_t tables = 0;     // stored DP tables
};

struct SolveResult {
    std::size_t size = 0;
    Preserver witness;
    SolveStats stats;
};

using ProgressFn = std::function<void(const SolveStats&)>;

struct SearchLimits {
    std::optional<std::chrono::milliseconds> time_limit;
    ProgressFn progress;
    std::uint64_t progress_every = std::uint64_t{1} << 20;
};

} // namespace dpres
