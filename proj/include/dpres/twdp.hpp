#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/result.hpp"
#include "dpres/treedec.hpp"

namespace dpres {

struct DpOptions {
    // false: an unreachable terminal pair is a precondition error instead of trivially preserved
    bool unreachable_preserved = true;
    // combine join children only when their relations agree on the bag (literal reading; loses optimality)
    bool join_requires_agreement = false;
    std::size_t max_scope = 64;
};

// Symmetric relation over a node's scope: row i holds the bits j with sigma(i, j) = 1.
using Relation = std::vector<std::uint64_t>;

struct ConnTable {
    Relation rows;
    std::uint64_t weight = 0;
    std::uint32_t left = 0;  // child table index
    std::uint32_t right = 0; // second child table index (join)
    bool took_edge = false;  // introduce-edge: edge added
};

// Forward dynamic program over a nice tree decomposition. Tables are
// generated leaf to root; each stored table is realized by a subgraph of G_t.
class ConnectivityDp {
public:
    ConnectivityDp(const Instance& inst, const NiceTreeDecomposition& ntd, const DpOptions& options = {});

    void run();
    SolveResult result() const;

    const std::vector<Vertex>& scope(std::size_t node) const { return scope_[node]; }
    const std::vector<ConnTable>& tables(std::size_t node) const { return tables_[node]; }
    // Edges of the partial solution behind a stored table.
    std::vector<Edge> reconstruct(std::size_t node, std::size_t table) const;
    Dist distance(Vertex u, Vertex v) const { return dist_[static_cast<std::size_t>(u) * n_ + v]; }
    // Largest double-counting correction seen at a join (0 when each edge is introduced once).
    std::uint64_t max_join_overlap() const { return max_overlap_; }

private:
    void leaf(std::size_t t);
    void introduce_vertex(std::size_t t);
    void introduce_edge(std::size_t t);
    void forget(std::size_t t);
    void join(std::size_t t);
    void store(std::size_t t, ConnTable table);

    const Instance& inst_;
    const NiceTreeDecomposition& ntd_;
    DpOptions options_;
    std::size_t n_ = 0;
    std::vector<Dist> dist_;
    std::vector<VertexPair> pairs_;
    std::vector<Vertex> terminals_;          // sorted
    std::vector<std::int32_t> term_index_;   // vertex -> position in terminals_, or -1
    std::vector<std::uint64_t> mates_;       // per terminal index: finite-distance partners
    std::vector<std::uint64_t> below_;       // per node: terminals occurring in the subtree
    std::vector<std::vector<Vertex>> scope_;
    std::vector<std::vector<ConnTable>> tables_;
    std::vector<std::unordered_map<std::string, std::uint32_t>> index_;
    std::uint64_t max_overlap_ = 0;
    bool done_ = false;
};

// Relation after adding edge (scope[iu], scope[iv]) to a realized subgraph: the edge
// itself plus every pair whose shortest path can run p..u-v..q through it.
Relation edge_closure(const Relation& sigma, std::span<const Vertex> scope, std::size_t iu, std::size_t iv,
                      const ConnectivityDp& dp);

SolveResult dp_solve(const Instance& inst, const NiceTreeDecomposition& ntd, const DpOptions& options = {});
// Decomposes the host graph first.
SolveResult dp_solve(const Instance& inst, const DpOptions& options = {});

} // namespace dpres
