#include "arqft/errors.hpp"
#include "arqft/parallel.hpp"
#include "arqft/qform.hpp"
#include "qform_engine.hpp"

#include <algorithm>
#include <set>

namespace arqft {

namespace detail {

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

int floor_half(int n) { return n >= 0 ? n / 2 : -((-n + 1) / 2); }

namespace {
std::array<int, 3> choose_order(const std::array<int, 3>& bounds) {
    int zc = 2;
    for (int k = 1; k >= 0; --k)
        if (bounds[k] > bounds[zc]) zc = k;
    std::array<int, 3> ord{};
    int n = 0;
    for (int k = 0; k < 3; ++k)
        if (k != zc) ord[n++] = k;
    ord[2] = zc;
    return ord;
}
}  // namespace

BoxEngine::BoxEngine(const TernaryForm& Q, std::array<int, 3> bounds, int out_deg, bool truncate)
    : a00_(Q.field()), a01_(Q.field()), a11_(Q.field()), l0_(Q.field()), l1_(Q.field()) {
    const PrimeModulus& F = Q.field();
    const std::uint32_t p = F.p();
    ord_ = choose_order(bounds);
    for (int k = 0; k < 3; ++k) b_[k] = std::max(bounds[ord_[k]], -1);
    const auto& A = Q.gram();
    const int x = ord_[0], y = ord_[1], z = ord_[2];
    a00_ = A[x][x];
    a01_ = A[x][y].scaled(2);
    a11_ = A[y][y];
    l0_ = A[x][z].scaled(2);
    l1_ = A[y][z].scaled(2);
    const Poly& a22 = A[z][z];
    nx_ = ipow(p, b_[0] + 1);
    ny_ = ipow(p, b_[1] + 1);

    int maxd = out_deg;
    if (!truncate) {
        auto term = [&](const Poly& c, int i, int j) {
            if (c.is_zero() || b_[i] < 0 || b_[j] < 0) return;
            maxd = std::max(maxd, c.degree() + b_[i] + b_[j]);
        };
        term(a00_, 0, 0);
        term(a01_, 0, 1);
        term(a11_, 1, 1);
        term(l0_, 0, 2);
        term(l1_, 1, 2);
        term(a22, 2, 2);
    }
    if (ipow(p, out_deg + 1) >= (std::uint64_t{1} << 31))
        throw PreconditionError("output degree too large for key encoding");
    if (maxd + 1 > 128) throw PreconditionError("value degree too large for the enumeration kernel");

    table_.p = p;
    table_.out_deg = out_deg;
    table_.truncate = truncate;
    table_.vlen = maxd + 1;
    table_.zlen = b_[2] + 1;
    table_.count = ipow(p, b_[2] + 1);
    table_.stride = (table_.count + 7) / 8 * 8;
    table_.z.assign(static_cast<std::size_t>(table_.zlen) * table_.stride, 0);
    table_.sq.assign(static_cast<std::size_t>(table_.vlen) * table_.stride, 0);
    zs_.reserve(table_.count);
    for (std::size_t i = 0; i < table_.count; ++i) {
        Poly zp = poly_from_index(F, b_[2] + 1, i);
        for (int j = 0; j < table_.zlen; ++j) table_.z[j * table_.stride + i] = static_cast<std::int32_t>(zp.coeff(j));
        const Poly s = a22 * zp * zp;
        for (int k = 0; k < table_.vlen; ++k) table_.sq[k * table_.stride + i] = static_cast<std::int32_t>(s.coeff(k));
        zs_.push_back(std::move(zp));
    }
    fn_ = select_kernel(table_, table_.vlen);
}

Vec3 BoxEngine::assemble(const Poly& x, const Poly& y, std::size_t iz) const {
    Vec3 v = zero_vec3(F());
    v[ord_[0]] = x;
    v[ord_[1]] = y;
    v[ord_[2]] = zs_[iz];
    return v;
}

}  // namespace detail

using detail::floor_half;

SquareClass square_class_infty(const RationalFunction& f) {
    if (f.is_zero()) throw PreconditionError("square class of zero");
    const bool odd = (f.degree() % 2) != 0;
    const bool ns = f.field().chi(f.lead()) < 0;
    if (odd) return ns ? SquareClass::UPi : SquareClass::Pi;
    return ns ? SquareClass::U : SquareClass::One;
}

const char* square_class_name(SquareClass c) {
    switch (c) {
        case SquareClass::One: return "1";
        case SquareClass::U: return "u";
        case SquareClass::Pi: return "T";
        case SquareClass::UPi: return "uT";
    }
    return "?";
}

InftyDiagonalization diagonalize_at_infty(const TernaryForm& Q) {
    const PrimeModulus& F = Q.field();
    const RationalFunction zero(F);
    const RationalFunction one(Poly::constant(F, 1));
    RMat3 M{{{zero, zero, zero}, {zero, zero, zero}, {zero, zero, zero}}};
    RMat3 S = M;
    for (int i = 0; i < 3; ++i) {
        S[i][i] = one;
        for (int j = 0; j < 3; ++j) M[i][j] = RationalFunction(Q.entry(i, j));
    }
    auto swap_basis = [&](int a, int b) {
        std::swap(M[a], M[b]);
        for (int i = 0; i < 3; ++i) {
            std::swap(M[i][a], M[i][b]);
            std::swap(S[i][a], S[i][b]);
        }
    };
    for (int k = 0; k < 3; ++k) {
        if (M[k][k].is_zero()) {
            int j = -1;
            for (int t = k + 1; t < 3 && j < 0; ++t)
                if (!M[t][t].is_zero()) j = t;
            if (j >= 0) {
                swap_basis(k, j);
            } else {
                for (int t = k + 1; t < 3 && j < 0; ++t)
                    if (!M[k][t].is_zero()) j = t;
                if (j < 0) throw PreconditionError("degenerate form");
                // e_k <- e_k + e_j makes the pivot 2 B(e_k, e_j)
                for (int i = 0; i < 3; ++i) M[i][k] = M[i][k] + M[i][j];
                for (int i = 0; i < 3; ++i) M[k][i] = M[k][i] + M[j][i];
                for (int i = 0; i < 3; ++i) S[i][k] = S[i][k] + S[i][j];
            }
        }
        for (int j = k + 1; j < 3; ++j) {
            if (M[k][j].is_zero()) continue;
            const RationalFunction c = M[k][j] / M[k][k];
            for (int i = 0; i < 3; ++i) M[i][j] = M[i][j] - c * M[i][k];
            for (int i = 0; i < 3; ++i) M[j][i] = M[j][i] - c * M[k][i];
            for (int i = 0; i < 3; ++i) S[i][j] = S[i][j] - c * S[i][k];
        }
    }
    InftyDiagonalization out{S, {M[0][0], M[1][1], M[2][2]}, {}};
    for (int i = 0; i < 3; ++i) out.classes[i] = square_class_infty(out.d[i]);
    return out;
}

bool is_anisotropic_infty(const TernaryForm& Q) {
    const auto dz = diagonalize_at_infty(Q);
    const auto& d = dz.d;
    return hilbert_infty(-(d[0] * d[2]), -(d[1] * d[2])) == SymbolValue::Minus;
}

Poly discriminant(const TernaryForm& Q) {
    const PrimeModulus& F = Q.field();
    const Poly det = Q.determinant();
    if (det.is_zero()) throw PreconditionError("degenerate form");
    const Coeff c = det.lead();
    const Coeff target = F.chi(c) > 0 ? 1 : F.smallest_non_square();
    return det.scaled(F.mul(target, F.inv(c)));
}

bool same_square_class(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero() || a.degree() != b.degree()) return false;
    const PrimeModulus& F = a.field();
    const Coeff c = F.mul(a.lead(), F.inv(b.lead()));
    return F.chi(c) > 0 && b.scaled(c) == a;
}

std::array<int, 3> coordinate_bounds(const TernaryForm& Q, int max_deg) {
    const auto dz = diagonalize_at_infty(Q);
    std::array<int, 3> cb{};
    for (int i = 0; i < 3; ++i) cb[i] = floor_half(max_deg - dz.d[i].degree());
    std::array<int, 3> B{-1, -1, -1};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            if (cb[i] < 0 || dz.S[j][i].is_zero()) continue;
            B[j] = std::max(B[j], cb[i] + dz.S[j][i].degree());
        }
    for (int& b : B) b = std::max(b, -1);
    return B;
}

namespace {
bool vec_less(const Vec3& a, const Vec3& b) {
    for (int k = 0; k < 3; ++k) {
        if (a[k] < b[k]) return true;
        if (b[k] < a[k]) return false;
    }
    return false;
}
}  // namespace

RepSet representations(const TernaryForm& Q, const Poly& D, unsigned workers, std::uint64_t budget) {
    if (D.is_zero()) throw PreconditionError("representations of 0 are not enumerated");
    if (!is_anisotropic_infty(Q)) throw PreconditionError("form is isotropic at infinity");
    RepSet out{D, {}, coordinate_bounds(Q, D.degree())};
    detail::BoxEngine eng(Q, out.bounds, D.degree(), false);
    if (eng.total() > budget) throw BudgetExceeded("enumeration box exceeds budget");
    const auto target = static_cast<std::int32_t>(poly_index(D));
    const unsigned W = std::max(1u, workers);
    std::vector<std::vector<Vec3>> slabs(W);
    parallel_for(W, W, [&](std::size_t w) {
        std::vector<std::int32_t> keys;
        for (std::uint64_t ix = w; ix < eng.nx(); ix += W)
            eng.run_x(ix, keys, [&](const Poly& x, const Poly& y, const std::vector<std::int32_t>& k) {
                for (std::size_t iz = 0; iz < k.size(); ++iz)
                    if (k[iz] == target) slabs[w].push_back(eng.assemble(x, y, iz));
            });
    });
    for (auto& s : slabs) out.solutions.insert(out.solutions.end(), s.begin(), s.end());
    std::sort(out.solutions.begin(), out.solutions.end(), vec_less);
    return out;
}

std::vector<std::uint64_t> theta_counts(const TernaryForm& Q, int max_deg, unsigned workers, std::uint64_t budget) {
    if (!is_anisotropic_infty(Q)) throw PreconditionError("form is isotropic at infinity");
    detail::BoxEngine eng(Q, coordinate_bounds(Q, max_deg), max_deg, false);
    if (eng.total() > budget) throw BudgetExceeded("enumeration box exceeds budget");
    const std::size_t size = detail::ipow(Q.field().p(), max_deg + 1);
    const unsigned W = std::max(1u, workers);
    std::vector<std::vector<std::uint64_t>> hist(W, std::vector<std::uint64_t>(size, 0));
    parallel_for(W, W, [&](std::size_t w) {
        std::vector<std::int32_t> keys;
        auto& h = hist[w];
        for (std::uint64_t ix = w; ix < eng.nx(); ix += W)
            eng.run_x(ix, keys, [&](const Poly&, const Poly&, const std::vector<std::int32_t>& k) {
                for (std::int32_t key : k)
                    if (key >= 0) ++h[key];
            });
    });
    for (unsigned w = 1; w < W; ++w)
        for (std::size_t i = 0; i < size; ++i) hist[0][i] += hist[w][i];
    return hist[0];
}

namespace {
std::optional<Poly> poly_sqrt(const Poly& f) {
    const PrimeModulus& F = f.field();
    if (f.is_zero()) return Poly(F);
    if (f.degree() % 2) return std::nullopt;
    const auto lead = F.sqrt(f.lead());
    if (!lead) return std::nullopt;
    const int m = f.degree() / 2;
    std::vector<Coeff> s(m + 1, 0);
    s[m] = *lead;
    const Coeff inv2s = F.inv(F.mul(2, s[m]));
    for (int k = m - 1; k >= 0; --k) {
        Coeff acc = f.coeff(m + k);
        for (int i = k + 1; i < m; ++i) {
            const int j = m + k - i;
            if (j > k && j < m) acc = F.sub(acc, F.mul(s[i], s[j]));
        }
        s[k] = F.mul(acc, inv2s);
    }
    Poly r(F, std::move(s));
    if (r * r != f) return std::nullopt;
    return r;
}
}  // namespace

CompletenessReport widened_check(const TernaryForm& Q, const Poly& D, int widen) {
    const PrimeModulus& F = Q.field();
    const RepSet rs = representations(Q, D);
    CompletenessReport out;
    out.boxed = rs.count();
    const auto ord = detail::choose_order(rs.bounds);
    const auto& A = Q.gram();
    const int xi = ord[0], yi = ord[1], zi = ord[2];
    const Poly a00 = A[xi][xi], a01 = A[xi][yi].scaled(2), a11 = A[yi][yi];
    const Poly l0 = A[xi][zi].scaled(2), l1 = A[yi][zi].scaled(2), a22 = A[zi][zi];
    const Poly two_a22 = a22.scaled(2), four_a22 = a22.scaled(4);
    const int bx = std::max(rs.bounds[xi], -1) + widen, by = std::max(rs.bounds[yi], -1) + widen;
    const std::uint64_t nx = detail::ipow(F.p(), bx + 1), ny = detail::ipow(F.p(), by + 1);
    std::vector<Poly> ys, ysq;
    for (std::uint64_t iy = 0; iy < ny; ++iy) {
        ys.push_back(poly_from_index(F, by + 1, iy));
        ysq.push_back(a11 * ys.back() * ys.back() - D);
    }
    std::size_t found = 0;
    for (std::uint64_t ix = 0; ix < nx; ++ix) {
        const Poly x = poly_from_index(F, bx + 1, ix);
        const Poly cx = a00 * x * x, mx = a01 * x, lx = l0 * x;
        for (std::uint64_t iy = 0; iy < ny; ++iy) {
            const Poly& y = ys[iy];
            const Poly C = cx + mx * y + ysq[iy];
            const Poly L = lx + l1 * y;
            const Poly disc = L * L - four_a22 * C;
            if (disc.degree() % 2 == 1 || (!disc.is_zero() && F.chi(disc.lead()) < 0)) continue;
            const auto s = poly_sqrt(disc);
            if (!s) continue;
            std::set<std::vector<Coeff>> roots;
            for (int sign : {1, -1}) {
                const Poly num = (sign > 0 ? *s : -*s) - L;
                const auto [q, r] = divmod(num, two_a22);
                if (r.is_zero()) roots.insert(q.coeffs());
            }
            found += roots.size();
        }
    }
    out.widened = found;
    out.complete = found == out.boxed;
    return out;
}

}  // namespace arqft
