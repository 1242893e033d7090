#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpres/graph.hpp"

// Bit-parallel distance checks for candidate subgraphs of hosts with at most 64
// vertices. A subgraph is given as one neighbor mask per vertex.
namespace dpres::kernels {

enum class Isa { scalar, avx2 };

inline constexpr std::size_t kMaxVertices = 64;
inline constexpr std::size_t kLanes = 4;

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa best_isa();
Isa active_isa();
// Selects the implementation used by the dispatching entry points. Throws if unsupported.
void set_isa(Isa isa);

struct PlanView {
    const std::uint32_t* source;
    const std::uint32_t* depth;
    const std::uint32_t* offset; // into targets; targets[offset[i] + L] is the level-L mask
    const std::uint64_t* targets;
    std::uint32_t count;
    std::uint32_t n; // vertices
};

// Host distances of the required pairs, grouped per source as level masks.
// Pairs unreachable in the host are dropped.
class DistancePlan {
public:
    DistancePlan(const Graph& host, std::span<const VertexPair> pairs);

    static bool fits(const Graph& host) { return host.n() <= kMaxVertices; }
    PlanView view() const;
    std::size_t n() const { return n_; }
    bool empty() const { return source_.empty(); }

private:
    std::size_t n_ = 0;
    std::vector<std::uint32_t> source_;
    std::vector<std::uint32_t> depth_;
    std::vector<std::uint32_t> offset_;
    std::vector<std::uint64_t> targets_;
};

// adj has plan.n() words.
bool preserves(const DistancePlan& plan, const std::uint64_t* adj);
// adj4 is lane-interleaved: adj4[v * kLanes + lane]. Returns a bitmask of passing lanes.
unsigned preserves4(const DistancePlan& plan, const std::uint64_t* adj4);

void add_edge(std::uint64_t* adj, Vertex u, Vertex v);
void add_edge_lane(std::uint64_t* adj4, std::size_t lane, Vertex u, Vertex v);

namespace detail {
bool preserves_scalar(const PlanView& plan, const std::uint64_t* adj);
unsigned preserves4_scalar(const PlanView& plan, const std::uint64_t* adj4);
#if defined(__x86_64__) || defined(__i386__)
unsigned preserves4_avx2(const PlanView& plan, const std::uint64_t* adj4);
#endif
} // namespace detail

} // namespace dpres::kernels
