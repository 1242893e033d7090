#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dpres/error.hpp"

namespace dpres {

using Vertex = std::uint32_t;
using Dist = std::uint32_t;

inline constexpr Dist kUnreachable = std::numeric_limits<Dist>::max();

// Unordered vertex pair stored as (min, max).
struct VertexPair {
    Vertex a = 0;
    Vertex b = 0;

    static constexpr VertexPair of(Vertex u, Vertex v) { return u < v ? VertexPair{u, v} : VertexPair{v, u}; }

    friend constexpr auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

using Edge = VertexPair;

class Graph {
public:
    Graph() = default;
    // Duplicate edges are merged; self-loops and out-of-range ids throw ParseError.
    Graph(std::size_t n, std::span<const Edge> edges);

    std::size_t n() const { return adj_.size(); }
    std::size_t m() const { return edges_.size(); }

    std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
    std::size_t degree(Vertex v) const { return adj_[v].size(); }
    bool has_edge(Vertex u, Vertex v) const;

    // Sorted canonical edge list; position in this list is the edge id.
    const std::vector<Edge>& edges() const { return edges_; }
    std::optional<std::size_t> edge_id(Edge e) const;

    friend bool operator==(const Graph& x, const Graph& y) { return x.edges_ == y.edges_ && x.n() == y.n(); }

private:
    std::vector<std::vector<Vertex>> adj_;
    std::vector<Edge> edges_;
};

struct GridSpec {
    std::size_t width = 0;
    std::size_t height = 0;

    Vertex id(std::size_t x, std::size_t y) const { return static_cast<Vertex>(y * width + x); }
    std::size_t x_of(Vertex v) const { return v % width; }
    std::size_t y_of(Vertex v) const { return v / width; }
    std::size_t size() const { return width * height; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct TerminalSet {
    std::vector<Vertex> vertices;
};

struct PairList {
    std::vector<VertexPair> pairs;
};

using TerminalSpec = std::variant<TerminalSet, PairList>;

struct Instance {
    Graph graph;
    TerminalSpec terminals = TerminalSet{};
    std::optional<std::size_t> budget;
    std::optional<GridSpec> grid;
    std::vector<std::string> comments;

    bool is_subset() const { return std::holds_alternative<TerminalSet>(terminals); }
};

struct Preserver {
    std::vector<Edge> edges; // sorted, canonical, unique

    std::size_t size() const { return edges.size(); }
    friend bool operator==(const Preserver&, const Preserver&) = default;
};

Preserver make_preserver(std::vector<Edge> edges);

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, std::vector<Vertex> sources, std::vector<std::vector<Dist>> rows);

    bool has_row(Vertex s) const { return s < row_of_.size() && row_of_[s] >= 0; }
    std::span<const Dist> row(Vertex s) const;
    Dist at(Vertex s, Vertex t) const { return row(s)[t]; }
    const std::vector<Vertex>& sources() const { return sources_; }

private:
    std::vector<Vertex> sources_;
    std::vector<std::vector<Dist>> rows_;
    std::vector<std::int32_t> row_of_;
};

std::vector<Dist> bfs_distances(const Graph& g, Vertex source);
DistanceMatrix all_pairs_distances(const Graph& g, std::span<const Vertex> sources);

// Canonical sorted pair list. Subset(S) expands to all pairs of S.
std::vector<VertexPair> pairs_of(const TerminalSpec& spec);
// Vertices occurring in some pair, sorted.
std::vector<Vertex> terminal_vertices(const TerminalSpec& spec);
void validate(const TerminalSpec& spec, std::size_t n);
void validate(const Instance& inst);

// Pairs of the instance with finite host distance (unreachable pairs are trivially preserved).
std::vector<VertexPair> finite_pairs(const Graph& g, std::span<const VertexPair> pairs, const DistanceMatrix& d);

std::vector<Edge> shortest_path_edge_union(const Graph& g, std::span<const VertexPair> pairs);

Graph subgraph(const Graph& g, std::span<const Edge> edges);

struct Violation {
    VertexPair pair;
    Dist host = 0;
    Dist sub = 0;
};

std::optional<Violation> first_violation(const Instance& inst, const Preserver& h);
bool verify_preserver(const Instance& inst, const Preserver& h);

// Removes edges in descending canonical order while the result stays a preserver.
Preserver prune_minimal(const Instance& inst, const Preserver& h);

} // namespace dpres
