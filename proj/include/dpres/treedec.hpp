#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dpres/graph.hpp"

namespace dpres {

struct TreeDecomposition {
    std::vector<std::vector<Vertex>> bags; // each sorted
    std::vector<std::pair<std::size_t, std::size_t>> tree_edges;

    // max bag size - 1; -1 for a decomposition with only empty bags
    int width() const;
};

// Throws PreconditionError describing the first violated property.
void validate(const TreeDecomposition& td, const Graph& g);

struct DecomposeOptions {
    std::size_t exact_limit = 12; // exact treewidth up to this many vertices
};

TreeDecomposition decompose(const Graph& g, const DecomposeOptions& options = {});
// Decomposition induced by eliminating vertices in the given order.
TreeDecomposition from_elimination_order(const Graph& g, const std::vector<Vertex>& order);
std::vector<Vertex> min_fill_order(const Graph& g);
// Optimal elimination order by dynamic programming over vertex subsets (n <= 20).
std::vector<Vertex> exact_elimination_order(const Graph& g);

// `td` header, `b <node> <v...>` bag lines, `t <a> <b>` tree edges.
TreeDecomposition parse_tree_decomposition(std::istream& in);
TreeDecomposition read_tree_decomposition_file(const std::string& path);
void write_tree_decomposition(std::ostream& out, const TreeDecomposition& td);

enum class NodeKind { leaf, introduce_vertex, introduce_edge, forget, join };

const char* node_kind_name(NodeKind kind);

struct NiceNode {
    NodeKind kind = NodeKind::leaf;
    std::vector<Vertex> bag; // sorted
    Vertex vertex = 0;       // introduce_vertex / forget
    Edge edge{};             // introduce_edge
    std::vector<std::size_t> children;
};

struct NiceTreeDecomposition {
    std::vector<NiceNode> nodes; // children precede parents
    std::size_t root = 0;

    int width() const;
};

NiceTreeDecomposition make_nice(const TreeDecomposition& td, const Graph& g);
// Structural checks: node kinds, bag transitions, empty root and leaves, each edge introduced once.
void validate(const NiceTreeDecomposition& ntd, const Graph& g);

} // namespace dpres
