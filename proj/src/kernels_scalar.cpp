#include "dpres/kernels.hpp"

namespace dpres::kernels::detail {

bool preserves_scalar(const PlanView& plan, const std::uint64_t* adj) {
    for (std::uint32_t i = 0; i < plan.count; ++i) {
        const std::uint64_t* targets = plan.targets + plan.offset[i];
        std::uint64_t visited = std::uint64_t{1} << plan.source[i];
        std::uint64_t frontier = visited;
        for (std::uint32_t level = 1; level <= plan.depth[i]; ++level) {
            std::uint64_t next = 0;
            for (std::uint64_t f = frontier; f != 0; f &= f - 1) next |= adj[__builtin_ctzll(f)];
            next &= ~visited;
            visited |= next;
            frontier = next;
            // a target at host distance L cannot be reached earlier, so reached now means equal
            if (targets[level] & ~visited) return false;
        }
    }
    return true;
}

unsigned preserves4_scalar(const PlanView& plan, const std::uint64_t* adj4) {
    unsigned ok = 0;
    std::uint64_t lane_adj[64];
    for (unsigned lane = 0; lane < kLanes; ++lane) {
        for (std::uint32_t v = 0; v < plan.n; ++v) lane_adj[v] = adj4[v * kLanes + lane];
        if (preserves_scalar(plan, lane_adj)) ok |= 1u << lane;
    }
    return ok;
}

} // namespace dpres::kernels::detail
