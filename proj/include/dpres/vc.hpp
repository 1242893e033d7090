#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/result.hpp"

namespace dpres {

// Minimum vertex cover by branching on an uncovered edge, bounded by a matching.
std::vector<Vertex> min_vertex_cover(const Graph& g);

struct CoverClass {
    std::vector<Vertex> members;      // vertices of I with this exact neighborhood
    std::vector<Vertex> neighborhood; // subset of the cover
    std::vector<Vertex> terminals;    // members that are terminals
    // Vertices kept after the reduction rules: all terminals if any, otherwise the
    // lowest-id member, or nothing when the neighborhood is empty.
    std::vector<Vertex> retained;
};

struct CoverStructure {
    std::vector<Vertex> cover;       // sorted
    std::vector<Vertex> independent; // sorted, V minus cover
    std::vector<CoverClass> classes; // ordered by lowest member id
};

// Throws PreconditionError if `cover` is not a vertex cover.
CoverStructure neighborhood_classes(const Graph& g, std::span<const Vertex> cover,
                                    std::span<const Vertex> terminals = {});

struct VcOptions {
    unsigned workers = 1;
    std::size_t cover_edge_cap = 24; // edges inside the cover; 2^this subgraphs are enumerated
    std::optional<std::vector<Vertex>> cover;
};

// Subset-terminal solver parameterized by vertex cover. Among optimal candidates the
// lexicographically smallest edge set is returned.
SolveResult vc_solve(const Instance& inst, const VcOptions& options = {});

} // namespace dpres
