#include "dpres/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <string_view>

namespace dpres::kernels {

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
    if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa best_isa() { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

namespace {

Isa initial_isa() {
    if (const char* env = std::getenv("DPRES_ISA"); env && std::string_view(env) == "scalar") return Isa::scalar;
    return best_isa();
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

} // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (!isa_supported(isa)) throw PreconditionError(std::string("ISA not supported on this CPU: ") + isa_name(isa));
    current().store(isa, std::memory_order_relaxed);
}

DistancePlan::DistancePlan(const Graph& host, std::span<const VertexPair> pairs) : n_(host.n()) {
    if (host.n() > kMaxVertices) throw SizeCapError("bit-parallel kernel supports at most 64 vertices");
    std::map<Vertex, std::vector<Vertex>> by_src;
    for (const auto& p : pairs) by_src[p.a].push_back(p.b);
    for (const auto& [s, ts] : by_src) {
        auto d = bfs_distances(host, s);
        std::uint32_t depth = 0;
        for (Vertex t : ts)
            if (d[t] != kUnreachable) depth = std::max(depth, d[t]);
        if (depth == 0) continue;
        source_.push_back(s);
        depth_.push_back(depth);
        offset_.push_back(static_cast<std::uint32_t>(targets_.size()));
        targets_.resize(targets_.size() + depth + 1, 0);
        std::uint64_t* levels = targets_.data() + offset_.back();
        for (Vertex t : ts)
            if (d[t] != kUnreachable) levels[d[t]] |= std::uint64_t{1} << t;
    }
}

PlanView DistancePlan::view() const {
    return PlanView{source_.data(), depth_.data(), offset_.data(), targets_.data(),
                    static_cast<std::uint32_t>(source_.size()), static_cast<std::uint32_t>(n_)};
}

bool preserves(const DistancePlan& plan, const std::uint64_t* adj) { return detail::preserves_scalar(plan.view(), adj); }

unsigned preserves4(const DistancePlan& plan, const std::uint64_t* adj4) {
#if defined(__x86_64__) || defined(__i386__)
    if (active_isa() == Isa::avx2) return detail::preserves4_avx2(plan.view(), adj4);
#endif
    return detail::preserves4_scalar(plan.view(), adj4);
}

void add_edge(std::uint64_t* adj, Vertex u, Vertex v) {
    adj[u] |= std::uint64_t{1} << v;
    adj[v] |= std::uint64_t{1} << u;
}

void add_edge_lane(std::uint64_t* adj4, std::size_t lane, Vertex u, Vertex v) {
    adj4[u * kLanes + lane] |= std::uint64_t{1} << v;
    adj4[v * kLanes + lane] |= std::uint64_t{1} << u;
}

} // namespace dpres::kernels
