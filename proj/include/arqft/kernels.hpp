#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace arqft {

// Values Q(x, y, z) = c0 + l*z + a33*z^2 for one fixed (x, y) and every z in a table.
// Coefficients are residues mod p stored as int32; the z table is structure-of-arrays.
struct ZTable {
    std::uint32_t p = 0;
    int out_deg = 0;       // keys encode coefficients 0..out_deg
    bool truncate = false; // ignore coefficients above out_deg instead of rejecting
    int vlen = 0;          // coefficients of the value that are computed
    int zlen = 0;          // coefficients per z
    std::size_t count = 0; // number of z
    std::size_t stride = 0; // count rounded up to 8
    std::vector<std::int32_t> z;   // z[j * stride + i]: coefficient j of z_i
    std::vector<std::int32_t> sq;  // sq[k * stride + i]: coefficient k of a33 * z_i^2
};

// key = sum_{k <= out_deg} q_k p^k, or -1 when some q_k with k > out_deg is nonzero
using EvalKeysFn = void (*)(const ZTable& t, const std::int32_t* c0, const std::int32_t* l, int llen,
                            std::int32_t* keys);

void eval_keys_scalar(const ZTable& t, const std::int32_t* c0, const std::int32_t* l, int llen, std::int32_t* keys);
void eval_keys_avx2(const ZTable& t, const std::int32_t* c0, const std::int32_t* l, int llen, std::int32_t* keys);

bool cpu_has_avx2();
// whether the int32 / float-reciprocal path is exact for this table and linear-term length
bool avx2_fits(const ZTable& t, int llen);
// AVX2 when the CPU has it and the table fits, scalar otherwise; ARQFT_KERNEL=scalar forces scalar
EvalKeysFn select_kernel(const ZTable& t, int llen);
const char* kernel_name(EvalKeysFn fn);

}  // namespace arqft
