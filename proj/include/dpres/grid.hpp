#pragma once

#include <cstdint>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/result.hpp"

namespace dpres {

Graph build_grid(const GridSpec& spec);

struct Point {
    std::size_t x = 0;
    std::size_t y = 0;
    friend auto operator<=>(const Point&, const Point&) = default;
};

struct HananSegment {
    std::uint32_t from = 0, to = 0; // intersection ids, `from` has the smaller coordinate
    bool horizontal = false;
    std::uint32_t length = 0;
    std::vector<Edge> edges; // grid edges along the segment
};

struct HananGrid {
    std::vector<std::size_t> xs; // sorted distinct terminal columns
    std::vector<std::size_t> ys; // sorted distinct terminal rows
    std::vector<Point> intersections; // index = iy * xs.size() + ix
    std::vector<HananSegment> segments;
    // segment ids leaving intersection i rightward / upward, or -1
    std::vector<std::int32_t> right, up;

    std::uint32_t intersection(std::size_t ix, std::size_t iy) const {
        return static_cast<std::uint32_t>(iy * xs.size() + ix);
    }
};

HananGrid hanan_grid(const GridSpec& spec, std::span<const Vertex> terminals);

struct GridOptions {
    unsigned workers = 1;
    // above this many segments the literal sweep refuses to run
    std::size_t sweep_segment_cap = 26;
    // memo of visited segment unions in the search; 0 disables
    std::size_t memo_limit = std::size_t{1} << 22;
};

// Exact minimum preserver on a full grid: a search over unions of monotone
// Hanan-lattice paths, one per pair, with segments taken whole.
SolveResult solve_grid_pdp(const GridSpec& spec, std::span<const VertexPair> pairs, const GridOptions& options = {});

// Literal enumeration of Hanan segment subsets in popcount bands, each candidate
// checked as a subgraph of the grid. Exponential in the segment count.
SolveResult solve_grid_pdp_sweep(const GridSpec& spec, std::span<const VertexPair> pairs,
                                 const GridOptions& options = {});

// Checks the instance is a full grid, then runs solve_grid_pdp.
SolveResult solve_grid_instance(const Instance& inst, const GridOptions& options = {});

} // namespace dpres
