#include "arqft/errors.hpp"
#include "arqft/qform.hpp"
#include "qform_engine.hpp"

#include <algorithm>
#include <functional>

namespace arqft {

namespace {

Poly dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 gram_apply(const TernaryForm& Q, const Vec3& v) { return mat3_apply(Q.gram(), v); }

// visit(g) for g with g^T A1 g = A2 and det g a nonzero constant; stops when visit returns false
void isometry_search(const TernaryForm& Q1, const TernaryForm& Q2, const std::function<bool(const Mat3&)>& visit) {
    if (!is_anisotropic_infty(Q1) || !is_anisotropic_infty(Q2))
        throw PreconditionError("isometry search needs forms anisotropic at infinity");
    std::array<std::vector<Vec3>, 3> R;
    for (int i = 0; i < 3; ++i) R[i] = representations(Q1, Q2.entry(i, i)).solutions;
    for (const Vec3& g0 : R[0]) {
        const Vec3 w0 = gram_apply(Q1, g0);
        for (const Vec3& g1 : R[1]) {
            if (dot(w0, g1) != Q2.entry(0, 1)) continue;
            const Vec3 w1 = gram_apply(Q1, g1);
            for (const Vec3& g2 : R[2]) {
                if (dot(w0, g2) != Q2.entry(0, 2) || dot(w1, g2) != Q2.entry(1, 2)) continue;
                Mat3 g = identity_mat3(Q1.field());
                for (int r = 0; r < 3; ++r) {
                    g[r][0] = g0[r];
                    g[r][1] = g1[r];
                    g[r][2] = g2[r];
                }
                if (mat3_det(g).degree() != 0) continue;
                if (!visit(g)) return;
            }
        }
    }
}

// Gaussian diagonalization of a symmetric matrix over F_p[T]/(P)
std::vector<Poly> residue_diagonal(const TernaryForm& Q, const ResidueField& K) {
    Mat3 M = Q.gram();
    for (auto& row : M)
        for (auto& e : row) e = K.reduce(e);
    auto red = [&](const Poly& a) { return K.reduce(a); };
    std::vector<Poly> diag;
    int n = 3;
    std::array<int, 3> idx{0, 1, 2};
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int t = k; t < n && piv < 0; ++t)
            if (!M[idx[t]][idx[t]].is_zero()) piv = t;
        if (piv < 0) {
            // all remaining diagonal zero: fold an off-diagonal entry in
            int a = -1, b = -1;
            for (int s = k; s < n && a < 0; ++s)
                for (int t = s + 1; t < n; ++t)
                    if (!M[idx[s]][idx[t]].is_zero()) {
                        a = s;
                        b = t;
                        break;
                    }
            if (a < 0) break;
            const int ia = idx[a], ib = idx[b];
            for (int i = 0; i < 3; ++i) M[i][ia] = red(M[i][ia] + M[i][ib]);
            for (int i = 0; i < 3; ++i) M[ia][i] = red(M[ia][i] + M[ib][i]);
            piv = a;
        }
        std::swap(idx[k], idx[piv]);
        const int ik = idx[k];
        const Poly inv = K.inv(M[ik][ik]);
        for (int t = k + 1; t < n; ++t) {
            const int it = idx[t];
            if (M[ik][it].is_zero()) continue;
            const Poly c = K.mul(M[ik][it], inv);
            for (int i = 0; i < 3; ++i) M[i][it] = red(M[i][it] - K.mul(c, M[i][ik]));
            for (int i = 0; i < 3; ++i) M[it][i] = red(M[it][i] - K.mul(c, M[ik][i]));
        }
        diag.push_back(M[ik][ik]);
    }
    diag.erase(std::remove_if(diag.begin(), diag.end(), [](const Poly& d) { return d.is_zero(); }), diag.end());
    return diag;
}

std::vector<Vec3> hnf_rows(std::vector<Vec3> rows) {
    for (int c = 0; c < 3; ++c) {
        while (true) {
            int piv = -1;
            for (std::size_t r = c; r < rows.size(); ++r)
                if (!rows[r][c].is_zero() && (piv < 0 || rows[r][c].degree() < rows[piv][c].degree()))
                    piv = static_cast<int>(r);
            if (piv < 0) throw CheckFailure("neighbor generators are not of full rank");
            std::swap(rows[c], rows[piv]);
            bool clean = true;
            for (std::size_t r = c + 1; r < rows.size(); ++r) {
                if (rows[r][c].is_zero()) continue;
                const Poly q = rows[r][c] / rows[c][c];
                for (int k = 0; k < 3; ++k) rows[r][k] -= q * rows[c][k];
                if (!rows[r][c].is_zero()) clean = false;
            }
            if (clean) break;
        }
    }
    for (std::size_t r = 3; r < rows.size(); ++r)
        for (int k = 0; k < 3; ++k)
            if (!rows[r][k].is_zero()) throw CheckFailure("neighbor generators left a residue");
    rows.erase(rows.begin() + 3, rows.end());
    return rows;
}

int key_degree(std::int32_t key, std::uint32_t p) {
    int d = -1;
    while (key > 0) {
        key /= static_cast<std::int32_t>(p);
        ++d;
    }
    return d;
}

}  // namespace

namespace {
// inverse of a matrix with constant nonzero determinant
Mat3 unimodular_inverse(const Mat3& m) {
    const PrimeModulus& F = m[0][0].field();
    const Poly det = mat3_det(m);
    if (det.degree() != 0) throw CheckFailure("basis matrix is not unimodular");
    const Coeff inv = F.inv(det.lead());
    Mat3 r = identity_mat3(F);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int a = (j + 1) % 3, b = (j + 2) % 3, c = (i + 1) % 3, d = (i + 2) % 3;
            r[i][j] = (m[a][c] * m[b][d] - m[a][d] * m[b][c]).scaled(inv);
        }
    return r;
}
}  // namespace

std::optional<Mat3> is_isometric(const TernaryForm& Q1, const TernaryForm& Q2) {
    if (!same_square_class(discriminant(Q1), discriminant(Q2))) return std::nullopt;
    Mat3 m1 = identity_mat3(Q1.field()), m2 = m1;
    const TernaryForm R1 = reduce(Q1, &m1), R2 = reduce(Q2, &m2);
    std::optional<Mat3> out;
    isometry_search(R1, R2, [&](const Mat3& h) {
        out = mat3_mul(mat3_mul(m1, h), unimodular_inverse(m2));
        return false;
    });
    return out;
}

std::uint64_t automorphism_count(const TernaryForm& Q_in) {
    const TernaryForm Q = reduce(Q_in);
    std::uint64_t n = 0;
    isometry_search(Q, Q, [&](const Mat3& g) {
        if (mat3_det(g).is_one()) ++n;
        return true;
    });
    return n;
}

int jordan_class(const TernaryForm& Q, const Poly& P) {
    const ResidueField K(P.monic());
    const auto diag = residue_diagonal(Q, K);
    if (diag.size() != 2) throw PreconditionError("jordan_class needs P to divide disc exactly once");
    return K.legendre(K.mul(diag[0], diag[1]));
}

bool same_genus(const TernaryForm& Q1, const TernaryForm& Q2) {
    const Poly d1 = Q1.determinant(), d2 = Q2.determinant();
    if (d1.is_zero() || d2.is_zero()) throw PreconditionError("degenerate form");
    if (!is_squarefree(d1) || !is_squarefree(d2)) throw PreconditionError("non-square-free discriminant is unsupported");
    if (!same_square_class(d1, d2)) return false;
    if (is_anisotropic_infty(Q1) != is_anisotropic_infty(Q2)) return false;
    if (d1.degree() <= 0) return true;
    for (const auto& [P, e] : factor(d1))
        if (jordan_class(Q1, P) != jordan_class(Q2, P)) return false;
    return true;
}

TernaryForm reduce(const TernaryForm& Q, Mat3* basis) {
    if (basis) *basis = identity_mat3(Q.field());
    if (!is_anisotropic_infty(Q)) return Q;
    const PrimeModulus& F = Q.field();
    int m0 = 0;
    for (int i = 0; i < 3; ++i) m0 = std::max(m0, Q.entry(i, i).degree());
    for (int m = 0; m <= m0 + 6; ++m) {
        detail::BoxEngine eng(Q, coordinate_bounds(Q, m), m, false);
        std::vector<std::pair<int, Vec3>> vs;
        std::vector<std::int32_t> keys;
        for (std::uint64_t ix = 0; ix < eng.nx(); ++ix)
            eng.run_x(ix, keys, [&](const Poly& x, const Poly& y, const std::vector<std::int32_t>& k) {
                for (std::size_t iz = 0; iz < k.size(); ++iz)
                    if (k[iz] > 0) vs.emplace_back(key_degree(k[iz], F.p()), eng.assemble(x, y, iz));
            });
        std::stable_sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            for (int k = 0; k < 3; ++k) {
                if (a.second[k] < b.second[k]) return true;
                if (b.second[k] < a.second[k]) return false;
            }
            return false;
        });
        std::vector<Vec3> picked;
        for (const auto& [d, v] : vs) {
            if (picked.empty()) {
                if (gcd(gcd(v[0], v[1]), v[2]).is_one()) picked.push_back(v);
            } else if (picked.size() == 1) {
                const Vec3& u = picked[0];
                const Poly g = gcd(gcd(u[0] * v[1] - u[1] * v[0], u[0] * v[2] - u[2] * v[0]), u[1] * v[2] - u[2] * v[1]);
                if (g.is_one()) picked.push_back(v);
            } else {
                Mat3 M = identity_mat3(F);
                for (int r = 0; r < 3; ++r) {
                    M[r][0] = picked[0][r];
                    M[r][1] = picked[1][r];
                    M[r][2] = v[r];
                }
                if (mat3_det(M).degree() == 0) {
                    if (basis) *basis = M;
                    return Q.transformed(M);
                }
            }
        }
    }
    return Q;
}

std::vector<TernaryForm> neighbors(const TernaryForm& Q, const Poly& P_in) {
    const Poly P = P_in.monic();
    const Poly disc = Q.determinant();
    if (divides(P, disc)) throw PreconditionError("neighbor prime divides the discriminant");
    const PrimeModulus& F = Q.field();
    const ResidueField K(P);
    const Poly P2 = P * P;
    const auto elems = K.elements();
    std::vector<TernaryForm> out;
    for (int lead = 0; lead < 3; ++lead) {
        const std::size_t free = static_cast<std::size_t>(2 - lead);
        std::size_t combos = 1;
        for (std::size_t i = 0; i < free; ++i) combos *= elems.size();
        for (std::size_t c = 0; c < combos; ++c) {
            Vec3 x = zero_vec3(F);
            x[lead] = Poly::constant(F, 1);
            std::size_t rem = c;
            for (int j = lead + 1; j < 3; ++j) {
                x[j] = elems[rem % elems.size()];
                rem /= elems.size();
            }
            const Poly qx = Q.evaluate(x);
            if (!divides(P, qx)) continue;
            // lift to Q(x) = 0 mod P^2
            Vec3 b = gram_apply(Q, x);
            int j = -1;
            for (int t = 0; t < 3 && j < 0; ++t)
                if (!K.reduce(b[t]).is_zero()) j = t;
            if (j < 0) throw CheckFailure("isotropic vector in the radical mod P");
            const Poly t = K.mul(-(qx / P), K.inv(K.reduce(b[j].scaled(2))));
            x[j] += P * t;
            if (!divides(P2, Q.evaluate(x))) throw CheckFailure("isotropic lift failed");
            b = gram_apply(Q, x);
            const Poly bj_inv = K.inv(K.reduce(b[j]));
            std::vector<Vec3> rows;
            Vec3 r0 = zero_vec3(F);
            r0[j] = P2;
            rows.push_back(r0);
            for (int i = 0; i < 3; ++i) {
                if (i == j) continue;
                Vec3 r = zero_vec3(F);
                r[i] = P;
                r[j] = -(P * K.mul(K.reduce(b[i]), bj_inv));
                rows.push_back(r);
            }
            rows.push_back(x);
            const auto H = hnf_rows(std::move(rows));
            Mat3 M = identity_mat3(F);
            for (int r = 0; r < 3; ++r)
                for (int k = 0; k < 3; ++k) M[k][r] = H[r][k];
            const Mat3 G = mat3_mul(mat3_mul(mat3_transpose(M), Q.gram()), M);
            Mat3 Gn = G;
            for (int r = 0; r < 3; ++r)
                for (int k = 0; k < 3; ++k) {
                    const auto [q, rr] = divmod(G[r][k], P2);
                    if (!rr.is_zero()) throw CheckFailure("neighbor Gram matrix is not integral");
                    Gn[r][k] = q;
                }
            TernaryForm nb(Gn);
            if (!same_square_class(nb.determinant(), disc)) throw CheckFailure("neighbor changed the discriminant");
            out.push_back(reduce(nb));
        }
    }
    return out;
}

std::vector<Poly> good_linear_primes(const TernaryForm& Q) {
    const PrimeModulus& F = Q.field();
    const Poly disc = Q.determinant();
    std::vector<Poly> out;
    for (std::uint32_t a = 0; a < F.p(); ++a) {
        const Poly P = Poly::from_ints(F, {static_cast<std::int64_t>(a), 1});
        if (!divides(P, disc)) out.push_back(P);
    }
    return out;
}

GenusSet genus_enumerate(const TernaryForm& Q, const std::vector<Poly>& primes, std::size_t max_classes) {
    if (primes.empty()) throw PreconditionError("genus walk needs at least one prime");
    GenusSet G;
    G.primes = primes;
    const int sig_deg = std::max(2, Q.determinant().degree());
    std::vector<std::vector<std::uint64_t>> sigs;
    auto add = [&](const TernaryForm& f) {
        auto sig = theta_counts(f, sig_deg);
        for (std::size_t i = 0; i < G.reps.size(); ++i)
            if (sigs[i] == sig && is_isometric(G.reps[i], f)) return;
        if (G.reps.size() >= max_classes) throw BudgetExceeded("genus walk exceeded the class limit");
        G.reps.push_back(f);
        sigs.push_back(std::move(sig));
    };
    auto close = [&](const std::vector<Poly>& ps) {
        for (std::size_t i = 0; i < G.reps.size(); ++i)
            for (const Poly& P : ps)
                for (const auto& nb : neighbors(G.reps[i], P)) add(nb);
    };
    add(reduce(Q));
    close({primes[0]});
    G.first_prime_classes = G.reps.size();
    close(primes);
    G.certified = primes.size() >= 2 && G.reps.size() == G.first_prime_classes;
    G.weight = 0;
    for (const auto& f : G.reps) {
        G.aut.push_back(automorphism_count(f));
        G.weight += Rational(BigInt(1), BigInt(G.aut.back()));
    }
    return G;
}

Rational genus_average(const GenusSet& G, const std::vector<std::uint64_t>& counts) {
    Rational s = 0;
    for (std::size_t i = 0; i < G.reps.size(); ++i) s += Rational(BigInt(counts[i]), BigInt(G.aut[i]));
    return s / G.weight;
}

Rational genus_rep_count(const GenusSet& G, const Poly& D) {
    std::vector<std::uint64_t> counts;
    for (const auto& f : G.reps) counts.push_back(representations(f, D).count());
    return genus_average(G, counts);
}

}  // namespace arqft
