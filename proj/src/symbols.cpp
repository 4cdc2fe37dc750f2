#include "arqft/symbols.hpp"

#include "arqft/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace arqft {

FinitePlace::FinitePlace(Poly P) : P_(std::move(P)) {
    if (!P_.is_monic() || P_.degree() < 1 || !is_irreducible(P_))
        throw PreconditionError("finite place needs a monic irreducible polynomial, got " + P_.to_string());
}

namespace {

int chi_power(const PrimeModulus& F, Coeff u, int k) {
    // chi(u)^k for a unit u; only the parity of k matters
    return (k % 2 == 0) ? 1 : F.chi(u);
}

// Euler criterion through the norm: x^{(q-1)/2} = N(x)^{(p-1)/2}
int legendre_irreducible(const Poly& d, const Poly& P) {
    Poly x = d % P;
    if (x.is_zero()) return 0;
    Poly acc = x, cur = x;
    for (int i = 1; i < P.degree(); ++i) {
        cur = powmod(cur, P.p(), P);
        acc = mulmod(acc, cur, P);
    }
    return P.field().chi(acc.coeff(0));
}

constexpr int kBuf = 96;

struct Buf {
    int deg = -1;
    Coeff c[kBuf];
};

void load(Buf& b, const Poly& a) {
    b.deg = a.degree();
    for (int i = 0; i <= b.deg; ++i) b.c[i] = a.coeff(i);
}

// a <- a mod b, b nonzero
void reduce_buf(Buf& a, const Buf& b, const PrimeModulus& F) {
    if (a.deg < b.deg) return;
    const std::uint32_t p = F.p();
    const Coeff il = F.inv(b.c[b.deg]);
    for (int i = a.deg; i >= b.deg; --i) {
        Coeff f = a.c[i];
        if (!f) continue;
        f = F.mul(f, il);
        const Coeff nf = p - f;
        Coeff* dst = a.c + (i - b.deg);
        for (int j = 0; j < b.deg; ++j) dst[j] = static_cast<Coeff>((dst[j] + static_cast<std::uint64_t>(nf) * b.c[j]) % p);
        dst[b.deg] = 0;
    }
    a.deg = b.deg - 1;
    while (a.deg >= 0 && a.c[a.deg] == 0) --a.deg;
}

}  // namespace

SymbolValue legendre(const Poly& d, const FinitePlace& P) { return symbol_of(legendre_irreducible(d, P.P())); }

SymbolValue jacobi(const Poly& d, const Poly& c) {
    if (c.is_zero()) throw std::domain_error("jacobi symbol with zero modulus");
    if (c.degree() == 0) return SymbolValue::Plus;
    const PrimeModulus& F = c.field();
    if (d.degree() >= kBuf || c.degree() >= kBuf) return jacobi_factored(d, c);
    return symbol_of(jacobi_coeffs(d.coeffs().data(), d.degree(), c.coeffs().data(), c.degree(), F));
}

int jacobi_coeffs(const Coeff* d, int deg_d, const Coeff* c, int deg_c, const PrimeModulus& F) {
    if (deg_c < 0) throw std::domain_error("jacobi symbol with zero modulus");
    if (deg_c == 0) return 1;
    if (deg_d >= kBuf || deg_c >= kBuf) throw std::invalid_argument("jacobi_coeffs: degree too large");
    Buf A, B;
    A.deg = deg_d;
    B.deg = deg_c;
    std::copy(d, d + deg_d + 1, A.c);
    std::copy(c, c + deg_c + 1, B.c);
    Buf* a = &A;
    Buf* b = &B;
    int res = 1;
    while (true) {
        reduce_buf(*a, *b, F);
        if (a->deg < 0) return 0;
        if (a->deg == 0) return res * chi_power(F, a->c[0], b->deg);
        // (a/b)(b/a) = (a,b)_infty
        res *= chi_power(F, a->c[a->deg], b->deg) * chi_power(F, b->c[b->deg], a->deg);
        std::swap(a, b);
    }
}

SymbolValue jacobi_factored(const Poly& d, const Poly& c) {
    if (c.is_zero()) throw std::domain_error("jacobi symbol with zero modulus");
    if (c.degree() == 0) return SymbolValue::Plus;
    int r = 1;
    for (const auto& [P, e] : factor(c)) {
        int l = legendre_irreducible(d, P);
        if (l == 0) return SymbolValue::Zero;
        if (e % 2) r *= l;
    }
    return symbol_of(r);
}

SymbolValue hilbert_infty(const RationalFunction& x, const RationalFunction& y) {
    if (x.is_zero() || y.is_zero()) throw std::domain_error("Hilbert symbol of zero");
    const PrimeModulus& F = x.field();
    return symbol_of(chi_power(F, x.lead(), y.degree()) * chi_power(F, y.lead(), x.degree()));
}

SymbolValue hilbert_finite(const RationalFunction& x, const RationalFunction& y, const FinitePlace& P) {
    if (x.is_zero() || y.is_zero()) throw std::domain_error("Hilbert symbol of zero");
    auto [vx, x0] = x.split_at(P.P());
    auto [vy, y0] = y.split_at(P.P());
    int r = 1;
    if (vy % 2) r *= legendre_irreducible(x0, P.P());
    if (vx % 2) r *= legendre_irreducible(y0, P.P());
    return symbol_of(r);
}

bool verify_reciprocity(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero() || gcd(a, b).degree() != 0)
        throw std::invalid_argument("verify_reciprocity needs nonzero coprime inputs");
    SymbolValue lhs = jacobi_factored(a, b) * jacobi_factored(b, a);
    return lhs == hilbert_infty(a, b);
}

bool verify_product_formula(const RationalFunction& a, const RationalFunction& b) {
    std::set<Poly> primes;
    for (const Poly* x : {&a.num(), &a.den(), &b.num(), &b.den()})
        if (x->degree() > 0)
            for (auto& [P, e] : factor(*x)) primes.insert(P);
    SymbolValue prod = hilbert_infty(a, b);
    for (const auto& P : primes) prod = prod * hilbert_finite(a, b, FinitePlace(P));
    return prod == SymbolValue::Plus;
}

namespace {

// Sum_k counts[k] * omega^(g k); exact a + b sqrt(p) recovered from the Galois conjugate
GaussSumValue assemble_gauss(const std::vector<long long>& counts, const PrimeModulus& F) {
    const std::uint32_t p = F.p();
    auto eval = [&](Coeff g) {
        std::complex<double> s = 0;
        for (std::uint32_t k = 0; k < p; ++k) {
            if (!counts[k]) continue;
            const double ang = 2.0 * std::numbers::pi * static_cast<double>((static_cast<std::uint64_t>(g) * k) % p) / p;
            s += static_cast<double>(counts[k]) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return s;
    };
    GaussSumValue out;
    out.value = eval(1);
    const std::complex<double> conj = eval(F.smallest_non_square());
    const std::complex<double> rat = (out.value + conj) / 2.0;
    const std::complex<double> irr = (out.value - conj) / (2.0 * std::sqrt(static_cast<double>(p)));
    const double ra = std::round(rat.real()), rb = std::round(irr.real());
    if (std::abs(rat - ra) < 1e-7 && std::abs(irr - rb) < 1e-7)
        out.exact = std::make_pair(static_cast<long long>(ra), static_cast<long long>(rb));
    return out;
}

}  // namespace

GaussSumValue gauss_sum_rational(const Poly& a, const Poly& D) {
    if (!D.is_monic() || D.degree() < 1 || !is_squarefree(D))
        throw PreconditionError("gauss_sum_rational needs a square-free monic modulus of degree >= 1");
    const PrimeModulus& F = D.field();
    const std::uint64_t n = norm(D);
    std::vector<long long> counts(F.p(), 0);
    const Poly a_red = a % D;
    for (std::uint64_t idx = 1; idx < n; ++idx) {
        Poly j = poly_from_index(F, D.degree(), idx);
        int chi = to_int(jacobi(j, D));
        if (!chi) continue;
        Poly h = mulmod(a_red, j, D).shifted(2);
        counts[additive_char_quotient(h, D)] += chi;
    }
    return assemble_gauss(counts, F);
}

GaussSumValue finite_field_gauss(const PrimeModulus& F, int s) {
    if (s < 1) throw std::invalid_argument("extension degree must be >= 1");
    Poly modulus = s == 1 ? Poly::T(F) : monic_irreducibles(F, s).front();
    ResidueField K(modulus);
    std::vector<long long> counts(F.p(), 0);
    for (const auto& x : K.elements()) {
        if (x.is_zero()) continue;
        counts[K.trace(x)] += K.legendre(x);
    }
    return assemble_gauss(counts, F);
}

bool hasse_davenport_check(const PrimeModulus& F, int s, double tol) {
    const auto t1 = finite_field_gauss(F, 1).value;
    const auto ts = finite_field_gauss(F, s).value;
    return std::abs(std::pow(-t1, s) + ts) < tol * std::max(1.0, std::abs(ts));
}

KohnenResult kohnen_symbol(const TernaryForm& Q, const Poly& D, int witnesses, std::uint64_t budget) {
    const PrimeModulus& F = Q.field();
    KohnenResult out;
    std::uint64_t spent = 0;
    auto consider = [&](const Vec3& v) {
        ++spent;
        Poly q = Q.evaluate(v);
        if (q.is_zero() || gcd(q, D).degree() != 0) return false;
        SymbolValue s = jacobi(q, D);
        if (out.witnesses_checked == 0) {
            out.value = s;
            out.witness = v;
        } else if (s != out.value) {
            out.consistent = false;
        }
        ++out.witnesses_checked;
        return out.witnesses_checked >= witnesses;
    };
    for (int i = 0; i < 3; ++i) {
        Vec3 e = zero_vec3(F);
        e[i] = Poly::constant(F, 1);
        if (consider(e)) return out;
    }
    const int max_deg = std::max(0, Q.determinant().degree()) + 2;
    bool budget_hit = false;
    for (int k = 0; k <= max_deg && !budget_hit; ++k) {
        std::uint64_t n = 1;
        for (int i = 0; i <= k; ++i) n *= F.p();
        std::uint64_t lower = n / F.p();  // vectors with all degrees < k were seen
        for (std::uint64_t x = 0; x < n && !budget_hit; ++x)
            for (std::uint64_t y = 0; y < n && !budget_hit; ++y)
                for (std::uint64_t z = 0; z < n; ++z) {
                    if (k > 0 && x < lower && y < lower && z < lower) continue;
                    if (x == 0 && y == 0 && z == 0) continue;
                    if (spent >= budget) {
                        budget_hit = true;
                        break;
                    }
                    Vec3 v{poly_from_index(F, k + 1, x), poly_from_index(F, k + 1, y), poly_from_index(F, k + 1, z)};
                    if (consider(v)) return out;
                }
    }
    if (out.witnesses_checked > 0) return out;
    out.status = budget_hit ? KohnenResult::Status::Exhausted : KohnenResult::Status::CertifiedZero;
    out.value = SymbolValue::Zero;
    return out;
}

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
    return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

RationalFunction mat2_det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

MetaplecticElement make_metaplectic(Mat2 g, int delta) {
    RationalFunction det = mat2_det(g);
    if (!(det.is_polynomial() && det.num().is_one())) throw PreconditionError("metaplectic element needs det g = 1");
    if (delta != 1 && delta != -1) throw PreconditionError("metaplectic sign must be +-1");
    return MetaplecticElement{std::move(g), delta};
}

RationalFunction cocycle_x(const Mat2& g) { return g.c.is_zero() ? g.d : g.c; }

SymbolValue cocycle_eps(const Mat2& g1, const Mat2& g2) {
    const Mat2 g3 = mat2_mul(g1, g2);
    const auto x1 = cocycle_x(g1), x2 = cocycle_x(g2), x3 = cocycle_x(g3);
    return hilbert_infty(x1, x2) * hilbert_infty(x2, x3) * hilbert_infty(x1, x3);
}

MetaplecticElement metaplectic_mul(const MetaplecticElement& x, const MetaplecticElement& y) {
    return MetaplecticElement{mat2_mul(x.g, y.g), x.delta * y.delta * to_int(cocycle_eps(x.g, y.g))};
}

SymbolValue kappa_split(const Mat2& g) {
    for (const auto* e : {&g.a, &g.b, &g.c, &g.d})
        if (!e->is_zero() && e->degree() > 0) throw PreconditionError("kappa_split needs entries in O_infty");
    if (!g.c.is_zero() && g.c.degree() < 0) return hilbert_infty(g.c, g.d);
    return SymbolValue::Plus;
}

SymbolValue eta_split(const Mat2& g) {
    for (const auto* e : {&g.a, &g.b, &g.c, &g.d})
        if (!e->is_polynomial()) throw PreconditionError("eta_split needs polynomial entries");
    if (g.c.is_zero()) return SymbolValue::Plus;
    return jacobi(g.d.num(), g.c.num());
}

}  // namespace arqft
