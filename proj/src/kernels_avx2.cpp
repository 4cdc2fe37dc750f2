#include "arqft/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <stdexcept>

namespace arqft {

// lanes run over z; accumulators stay exact in int32 and below 2^22 (see avx2_fits)
__attribute__((target("avx2,fma"))) void eval_keys_avx2(const ZTable& t, const std::int32_t* c0,
                                                        const std::int32_t* l, int llen, std::int32_t* keys) {
    if (t.vlen > 128) throw std::invalid_argument("value length too large");
    const __m256i vp = _mm256_set1_epi32(static_cast<int>(t.p));
    const __m256 vinv = _mm256_set1_ps(1.0f / static_cast<float>(t.p));
    const __m256i zero = _mm256_setzero_si256();
    const __m256i pm1 = _mm256_set1_epi32(static_cast<int>(t.p) - 1);
    const int top = std::min(t.out_deg, t.vlen - 1);
    __m256i q[128];
    alignas(32) std::int32_t out[8];
    for (std::size_t i = 0; i < t.count; i += 8) {
        __m256i high = zero;
        for (int k = 0; k < t.vlen; ++k) {
            __m256i acc = _mm256_add_epi32(
                _mm256_set1_epi32(c0[k]),
                _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&t.sq[k * t.stride + i])));
            const int amax = std::min(llen - 1, k);
            for (int a = 0; a <= amax; ++a) {
                const int j = k - a;
                if (j >= t.zlen) continue;
                const __m256i zj = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(&t.z[j * t.stride + i]));
                acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(_mm256_set1_epi32(l[a]), zj));
            }
            const __m256 qf = _mm256_floor_ps(_mm256_mul_ps(_mm256_cvtepi32_ps(acc), vinv));
            __m256i r = _mm256_sub_epi32(acc, _mm256_mullo_epi32(_mm256_cvttps_epi32(qf), vp));
            // quotient may be off by one either way
            r = _mm256_add_epi32(r, _mm256_and_si256(_mm256_cmpgt_epi32(zero, r), vp));
            r = _mm256_sub_epi32(r, _mm256_and_si256(_mm256_cmpgt_epi32(r, pm1), vp));
            q[k] = r;
            if (!t.truncate && k > t.out_deg) high = _mm256_or_si256(high, r);
        }
        __m256i key = zero;
        for (int k = top; k >= 0; --k) key = _mm256_add_epi32(_mm256_mullo_epi32(key, vp), q[k]);
        const __m256i bad = _mm256_cmpgt_epi32(high, zero);
        key = _mm256_or_si256(key, bad);  // all ones is -1
        _mm256_store_si256(reinterpret_cast<__m256i*>(out), key);
        const std::size_t n = std::min<std::size_t>(8, t.count - i);
        std::copy(out, out + n, keys + i);
    }
}

}  // namespace arqft
