#include "arqft/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace arqft {

void eval_keys_scalar(const ZTable& t, const std::int32_t* c0, const std::int32_t* l, int llen, std::int32_t* keys) {
    const std::int64_t p = t.p;
    std::int64_t q[128];
    if (t.vlen > 128) throw std::invalid_argument("value length too large");
    for (std::size_t i = 0; i < t.count; ++i) {
        for (int k = 0; k < t.vlen; ++k) {
            std::int64_t acc = c0[k] + t.sq[k * t.stride + i];
            for (int a = 0; a < llen && a <= k; ++a) {
                const int j = k - a;
                if (j < t.zlen) acc += static_cast<std::int64_t>(l[a]) * t.z[j * t.stride + i];
            }
            q[k] = acc % p;
        }
        bool high = false;
        if (!t.truncate)
            for (int k = t.out_deg + 1; k < t.vlen; ++k) high = high || q[k] != 0;
        if (high) {
            keys[i] = -1;
            continue;
        }
        std::int64_t key = 0;
        for (int k = std::min(t.out_deg, t.vlen - 1); k >= 0; --k) key = key * p + q[k];
        keys[i] = static_cast<std::int32_t>(key);
    }
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

bool avx2_fits(const ZTable& t, int llen) {
    // every accumulator stays below 2^22 so the float quotient is off by at most one
    const std::int64_t p = t.p;
    if ((static_cast<std::int64_t>(llen) + 2) * p * p >= (1 << 22)) return false;
    std::int64_t pw = 1;
    for (int k = 0; k <= t.out_deg; ++k) {
        pw *= p;
        if (pw >= (std::int64_t{1} << 31)) return false;
    }
    return t.vlen <= 128;
}

EvalKeysFn select_kernel(const ZTable& t, int llen) {
    const char* env = std::getenv("ARQFT_KERNEL");
    if (env && std::strcmp(env, "scalar") == 0) return eval_keys_scalar;
    if (cpu_has_avx2() && avx2_fits(t, llen)) return eval_keys_avx2;
    return eval_keys_scalar;
}

const char* kernel_name(EvalKeysFn fn) { return fn == eval_keys_avx2 ? "avx2" : "scalar"; }

}  // namespace arqft
