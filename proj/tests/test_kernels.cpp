#include <doctest.h>

#include "arqft/kernels.hpp"
#include "arqft/field.hpp"
#include "oracles.hpp"

#include <random>

using namespace arqft;

namespace {

struct Case {
    ZTable t;
    std::vector<Poly> zs;
    Poly a22;
};

Case make_table(const PrimeModulus& F, int zdeg, int out_deg, bool truncate, int vlen, std::mt19937_64& rng) {
    Case c{{}, {}, oracle::random_nonzero(F, 2, rng)};
    auto& t = c.t;
    t.p = F.p();
    t.out_deg = out_deg;
    t.truncate = truncate;
    t.vlen = vlen;
    t.zlen = zdeg + 1;
    t.count = 1;
    for (int i = 0; i <= zdeg; ++i) t.count *= F.p();
    // drop a few so the tail lane block is partial
    t.count -= 3;
    t.stride = (t.count + 7) / 8 * 8;
    t.z.assign(t.zlen * t.stride, 0);
    t.sq.assign(t.vlen * t.stride, 0);
    for (std::size_t i = 0; i < t.count; ++i) {
        Poly z = poly_from_index(F, zdeg + 1, i);
        for (int j = 0; j < t.zlen; ++j) t.z[j * t.stride + i] = static_cast<std::int32_t>(z.coeff(j));
        const Poly s = c.a22 * z * z;
        for (int k = 0; k < t.vlen; ++k) t.sq[k * t.stride + i] = static_cast<std::int32_t>(s.coeff(k));
        c.zs.push_back(z);
    }
    return c;
}

std::vector<std::int32_t> to_arr(const Poly& f, int n) {
    std::vector<std::int32_t> a(n, 0);
    for (int k = 0; k < n && k <= f.degree(); ++k) a[k] = static_cast<std::int32_t>(f.coeff(k));
    return a;
}

// key straight from the polynomial value
std::int32_t key_of(const Poly& v, int out_deg, bool truncate) {
    if (!truncate && v.degree() > out_deg) return -1;
    return static_cast<std::int32_t>(poly_index(v.truncated(out_deg + 1)));
}

}  // namespace

TEST_CASE("scalar kernel matches polynomial evaluation") {
    std::mt19937_64 rng(11);
    for (std::uint32_t p : {5u, 13u}) {
        const auto& F = PrimeModulus::get(p);
        for (int rep = 0; rep < 20; ++rep) {
            const bool truncate = rep % 2 == 1;
            const int zdeg = p == 5 ? 2 : 1;
            const int out_deg = 2 + rep % 3;
            const int vlen = truncate ? out_deg + 1 : 2 + 2 * zdeg + 2;
            auto c = make_table(F, zdeg, out_deg, truncate, vlen, rng);
            const Poly C = oracle::random_poly(F, truncate ? 6 : 3, rng);
            const Poly L = oracle::random_poly(F, 2, rng);
            const auto c0 = to_arr(C, vlen);
            const auto l = to_arr(L, vlen);
            std::vector<std::int32_t> keys(c.t.count);
            eval_keys_scalar(c.t, c0.data(), l.data(), std::min(L.degree() + 1, vlen), keys.data());
            for (std::size_t i = 0; i < c.t.count; ++i) {
                const Poly v = C + L * c.zs[i] + c.a22 * c.zs[i] * c.zs[i];
                REQUIRE(keys[i] == key_of(truncate ? v.truncated(vlen) : v, out_deg, truncate));
            }
        }
    }
}

TEST_CASE("avx2 kernel agrees with scalar kernel") {
    if (!cpu_has_avx2()) {
        MESSAGE("no AVX2 on this CPU, equivalence not exercised");
        return;
    }
    std::mt19937_64 rng(12);
    std::size_t compared = 0;
    for (std::uint32_t p : {5u, 13u, 29u}) {
        const auto& F = PrimeModulus::get(p);
        for (int rep = 0; rep < 60; ++rep) {
            const bool truncate = rep % 3 == 0;
            const int zdeg = p == 5 ? 3 : 1;
            const int out_deg = 1 + rep % 4;
            const int vlen = truncate ? out_deg + 1 : out_deg + 1 + rep % 5;
            auto c = make_table(F, zdeg, out_deg, truncate, vlen, rng);
            // arbitrary residues, not only values of a real form
            std::uniform_int_distribution<std::int32_t> res(0, static_cast<std::int32_t>(p) - 1);
            std::vector<std::int32_t> c0(vlen), l(vlen);
            for (auto& x : c0) x = res(rng);
            for (auto& x : l) x = res(rng);
            const int llen = rep % (vlen + 1);
            REQUIRE(avx2_fits(c.t, vlen));
            std::vector<std::int32_t> a(c.t.count), b(c.t.count);
            eval_keys_scalar(c.t, c0.data(), l.data(), llen, a.data());
            eval_keys_avx2(c.t, c0.data(), l.data(), llen, b.data());
            REQUIRE(a == b);
            compared += a.size();
        }
    }
    CHECK(compared > 10000);
}

TEST_CASE("avx2 reduction at the top of the accumulator range") {
    if (!cpu_has_avx2()) return;
    // all residues p-1 drive every accumulator to its maximum
    const auto& F = PrimeModulus::get(613);
    ZTable t;
    t.p = 613;
    t.out_deg = 2;
    t.truncate = true;
    t.vlen = 3;
    t.zlen = 3;
    t.count = 13;
    t.stride = 16;
    t.z.assign(t.zlen * t.stride, 612);
    t.sq.assign(t.vlen * t.stride, 612);
    std::vector<std::int32_t> c0(3, 612), l(3, 612);
    REQUIRE(avx2_fits(t, 3));
    std::vector<std::int32_t> a(t.count), b(t.count);
    eval_keys_scalar(t, c0.data(), l.data(), 3, a.data());
    eval_keys_avx2(t, c0.data(), l.data(), 3, b.data());
    CHECK(a == b);
    (void)F;
}

TEST_CASE("kernel selection") {
    ZTable t;
    t.p = 5;
    t.out_deg = 3;
    t.vlen = 8;
    CHECK(avx2_fits(t, 8));
    t.p = 3001;
    CHECK_FALSE(avx2_fits(t, 8));
    CHECK(select_kernel(t, 8) == eval_keys_scalar);
    t.p = 5;
    CHECK(select_kernel(t, 8) == (cpu_has_avx2() ? eval_keys_avx2 : eval_keys_scalar));
    CHECK(std::string(kernel_name(eval_keys_scalar)) == "scalar");
}
