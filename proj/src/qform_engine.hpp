#pragma once

// box enumeration shared by the qform sources

#include "arqft/kernels.hpp"
#include "arqft/qform.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace arqft::detail {

std::uint64_t ipow(std::uint64_t b, int e);
int floor_half(int n);

// walks x, y over their boxes and evaluates all z of the z box at once with the kernel;
// the coordinate with the largest bound plays z
class BoxEngine {
public:
    BoxEngine(const TernaryForm& Q, std::array<int, 3> bounds, int out_deg, bool truncate);

    std::uint64_t total() const { return nx_ * ny_ * static_cast<std::uint64_t>(table_.count); }
    std::uint64_t nx() const { return nx_; }
    const char* kernel() const { return kernel_name(fn_); }

    // fn(x, y, keys, zs) for every y, at this x index; keys has one entry per z
    template <class Fn>
    void run_x(std::uint64_t ix, std::vector<std::int32_t>& keys, Fn&& fn) const {
        keys.resize(table_.count);
        const Poly x = poly_from_index(F(), b_[0] + 1, ix);
        const Poly xx = a00_ * x * x;
        const Poly xl = l0_ * x;
        const Poly xm = a01_ * x;
        std::vector<std::int32_t> c0(table_.vlen), l(table_.vlen);
        for (std::uint64_t iy = 0; iy < ny_; ++iy) {
            const Poly y = poly_from_index(F(), b_[1] + 1, iy);
            const Poly C = xx + xm * y + a11_ * y * y;
            const Poly L = xl + l1_ * y;
            fill(C, c0);
            const int llen = std::min(L.degree() + 1, table_.vlen);
            fill(L, l);
            fn_(table_, c0.data(), l.data(), llen, keys.data());
            fn(x, y, keys);
        }
    }

    // coordinates in the caller's order
    Vec3 assemble(const Poly& x, const Poly& y, std::size_t iz) const;
    const Poly& z(std::size_t iz) const { return zs_[iz]; }

private:
    const PrimeModulus& F() const { return a00_.field(); }
    void fill(const Poly& f, std::vector<std::int32_t>& out) const {
        std::fill(out.begin(), out.end(), 0);
        const int n = std::min(f.degree() + 1, table_.vlen);
        for (int k = 0; k < n; ++k) out[k] = static_cast<std::int32_t>(f.coeff(k));
    }

    std::array<int, 3> ord_{};   // ord_[k] = caller coordinate enumerated as x, y, z
    std::array<int, 3> b_{};
    Poly a00_, a01_, a11_, l0_, l1_;
    std::uint64_t nx_ = 0, ny_ = 0;
    ZTable table_;
    std::vector<Poly> zs_;
    EvalKeysFn fn_ = nullptr;
};

}  // namespace arqft::detail
