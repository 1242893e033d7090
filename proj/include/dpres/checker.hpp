#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dpres/graph.hpp"
#include "dpres/kernels.hpp"

namespace dpres {

// Repeated preserver checks against one host and pair list. Uses the
// bit-parallel kernel when the host has at most 64 vertices, BFS otherwise.
class PreserverChecker {
public:
    PreserverChecker(const Graph& host, std::span<const VertexPair> pairs);

    bool check(std::span<const Edge> edges) const;
    // Checks up to kernels::kLanes candidates; bit i is set iff candidate i preserves.
    unsigned check_batch(std::span<const std::vector<Edge>> candidates) const;
    bool uses_kernel() const { return plan_ != nullptr; }

private:
    const Graph& host_;
    std::vector<VertexPair> pairs_;
    std::vector<Vertex> sources_;
    DistanceMatrix host_dist_;
    std::unique_ptr<kernels::DistancePlan> plan_;
};

} // namespace dpres
