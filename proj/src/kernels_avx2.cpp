#include "dpres/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

namespace dpres::kernels::detail {

__attribute__((target("avx2"))) unsigned preserves4_avx2(const PlanView& plan, const std::uint64_t* adj4) {
    const __m256i zero = _mm256_setzero_si256();
    const __m256i one = _mm256_set1_epi64x(1);
    __m256i ok = _mm256_set1_epi64x(-1);

    for (std::uint32_t i = 0; i < plan.count; ++i) {
        const std::uint64_t* targets = plan.targets + plan.offset[i];
        __m256i visited = _mm256_set1_epi64x(static_cast<long long>(std::uint64_t{1} << plan.source[i]));
        __m256i frontier = _mm256_and_si256(visited, ok);
        for (std::uint32_t level = 1; level <= plan.depth[i]; ++level) {
            alignas(32) std::uint64_t lanes[4];
            _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), frontier);
            std::uint64_t any = lanes[0] | lanes[1] | lanes[2] | lanes[3];

            __m256i next = zero;
            for (; any != 0; any &= any - 1) {
                const int v = __builtin_ctzll(any);
                __m256i bit = _mm256_and_si256(_mm256_srlv_epi64(frontier, _mm256_set1_epi64x(v)), one);
                __m256i lane_mask = _mm256_sub_epi64(zero, bit);
                __m256i row = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(adj4 + static_cast<std::size_t>(v) * kLanes));
                next = _mm256_or_si256(next, _mm256_and_si256(row, lane_mask));
            }
            next = _mm256_andnot_si256(visited, next);
            visited = _mm256_or_si256(visited, next);

            __m256i miss = _mm256_andnot_si256(visited, _mm256_set1_epi64x(static_cast<long long>(targets[level])));
            ok = _mm256_and_si256(ok, _mm256_cmpeq_epi64(miss, zero));
            if (_mm256_testz_si256(ok, ok)) return 0;
            frontier = _mm256_and_si256(next, ok);
        }
    }
    return static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(ok)));
}

} // namespace dpres::kernels::detail

#endif
