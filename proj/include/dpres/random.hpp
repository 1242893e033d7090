#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "dpres/graph.hpp"

namespace dpres {

struct RandomSpec {
    std::size_t n = 8;
    std::size_t m = 12;            // capped at n(n-1)/2; ignored for grids
    std::size_t terminals = 0;     // > 0: subset instance with this many terminals
    std::size_t pairs = 0;         // > 0: pair instance (used when terminals == 0)
    std::optional<GridSpec> grid;  // full grid host instead of G(n, m)
    bool connected = false;        // start from a random spanning tree (needs m >= n - 1)
};

Instance random_instance(const RandomSpec& spec, std::mt19937_64& rng);
Instance random_instance(const RandomSpec& spec, std::uint64_t seed);

// Host graph with a planted vertex cover of `cover` vertices: every edge touches the
// cover. Edges inside the cover appear with probability p_inner, cover-to-rest with p_outer.
Instance random_low_cover_instance(std::size_t n, std::size_t cover, double p_inner, double p_outer,
                                   std::size_t terminals, std::mt19937_64& rng);

} // namespace dpres
