#pragma once

#include <random>
#include <string>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/reductions.hpp"
#include "dpres/twdp.hpp"

namespace dpres::testing {

Instance make_instance(std::size_t n, std::vector<Edge> edges, TerminalSpec terminals);
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph star_graph(std::size_t leaves); // center 0
Graph complete_graph(std::size_t n);

// Plain BFS on an explicit edge list, independent of the library's distance code.
std::vector<Dist> naive_distances(std::size_t n, const std::vector<Edge>& edges, Vertex source);

// Edges on some shortest path of some pair, by explicit DFS over all shortest paths.
std::vector<Edge> enumerate_shortest_path_edges(const Graph& g, const std::vector<VertexPair>& pairs);

// Seeded corpus of small instances: n <= 10, m <= 20, at most 4 terminals or 4 pairs.
std::vector<Instance> sweep_corpus(std::size_t count, std::uint64_t seed);

// Checks the structural properties a vertex-cover solver witness must have with
// respect to the cover it used: identical terminal neighborhoods per class, at most
// one non-terminal per class with edges, none when the class holds terminals.
bool class_structure_ok(const Instance& inst, const Preserver& h, std::string* why = nullptr);

// Checks every stored table at every node: the reconstructed subgraph realizes the
// relation exactly and has the stored weight. Returns the number of violations.
std::size_t table_violations(const ConnectivityDp& dp, const NiceTreeDecomposition& ntd, std::string* first = nullptr);

bool is_planar(const Graph& g);

MccInstance random_mcc(std::mt19937_64& rng, std::size_t k, std::size_t n, double p);
Mwc3Instance random_mwc3(std::mt19937_64& rng, std::size_t n, std::size_t m);

} // namespace dpres::testing
