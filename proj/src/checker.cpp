#include "dpres/checker.hpp"

#include <algorithm>

namespace dpres {

PreserverChecker::PreserverChecker(const Graph& host, std::span<const VertexPair> pairs) : host_(host) {
    std::vector<Vertex> ends;
    for (const auto& p : pairs) ends.push_back(p.a);
    host_dist_ = all_pairs_distances(host, ends);
    pairs_ = finite_pairs(host, pairs, host_dist_);
    for (const auto& p : pairs_) sources_.push_back(p.a);
    std::sort(sources_.begin(), sources_.end());
    sources_.erase(std::unique(sources_.begin(), sources_.end()), sources_.end());
    if (kernels::DistancePlan::fits(host)) plan_ = std::make_unique<kernels::DistancePlan>(host, pairs_);
}

bool PreserverChecker::check(std::span<const Edge> edges) const {
    if (plan_) {
        std::uint64_t adj[kernels::kMaxVertices] = {};
        for (const Edge& e : edges) kernels::add_edge(adj, e.a, e.b);
        return kernels::preserves(*plan_, adj);
    }
    Graph sub(host_.n(), edges);
    for (Vertex s : sources_) {
        auto dh = bfs_distances(sub, s);
        auto dg = host_dist_.row(s);
        for (const auto& p : pairs_)
            if (p.a == s && dh[p.b] != dg[p.b]) return false;
    }
    return true;
}

unsigned PreserverChecker::check_batch(std::span<const std::vector<Edge>> candidates) const {
    const std::size_t count = std::min(candidates.size(), kernels::kLanes);
    if (!plan_) {
        unsigned ok = 0;
        for (std::size_t i = 0; i < count; ++i)
            if (check(candidates[i])) ok |= 1u << i;
        return ok;
    }
    alignas(32) std::uint64_t adj4[kernels::kMaxVertices * kernels::kLanes] = {};
    for (std::size_t i = 0; i < count; ++i)
        for (const Edge& e : candidates[i]) kernels::add_edge_lane(adj4, i, e.a, e.b);
    unsigned mask = kernels::preserves4(*plan_, adj4);
    return mask & ((1u << count) - 1);
}

} // namespace dpres
