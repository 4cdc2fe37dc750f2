#include "arqft/spectral.hpp"

#include "arqft/errors.hpp"
#include "arqft/symbols.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace arqft {

namespace {

double scale_of(std::initializer_list<cplx> xs) {
    double s = 1;
    for (auto x : xs) s = std::max(s, std::abs(x));
    return s;
}

void record(RecursionCheck& r, double res, double tol) {
    r.max_residual = std::max(r.max_residual, res);
    ++r.checked;
    if (res > tol) r.ok = false;
}

// T^{-j} as an element of k
RationalFunction t_pow_neg(const PrimeModulus& F, int j) {
    if (j >= 0) return RationalFunction(Poly::constant(F, 1), Poly::monomial(F, 1, j));
    return RationalFunction(Poly::monomial(F, 1, -j));
}

int hilbert_int(const RationalFunction& x, const RationalFunction& y) { return to_int(hilbert_infty(x, y)); }

cplx add_char(const RationalFunction& x) {
    const double p = x.field().p();
    const double t = 2 * std::numbers::pi * additive_char(x) / p;
    return {std::cos(t), std::sin(t)};
}

}  // namespace

cplx spectral_eigenvalue(std::uint32_t p, cplx theta) {
    const cplx e = std::exp(cplx(0, 1) * theta);
    return (e + 1.0 / e) / std::sqrt(static_cast<double>(p));
}

cplx chebyshev_ratio(cplx q, int m) {
    if (m == 0) return 0;
    if (m < 0) return -chebyshev_ratio(q, -m);
    const cplx qi = 1.0 / q;
    if (std::abs(q - qi) > 1e-4) return (std::pow(q, m) - std::pow(qi, m)) / (q - qi);
    // limit branch: q^{m-1} + q^{m-3} + ... + q^{1-m}, equal to m q^{m-1} at q = +-1
    cplx s = 0;
    for (int k = 0; k < m; ++k) s += std::pow(q, m - 1 - 2 * k);
    return s;
}

cplx whittaker0(std::uint32_t p, int n, cplx theta) {
    if (n < 2) return 0;
    const cplx e = std::exp(cplx(0, 1) * theta);
    // sqrt(p)/(e - 1/e) [(e/sqrt p)^{n-1} - (1/(e sqrt p))^{n-1}]
    return std::pow(static_cast<double>(p), 1.0 - n / 2.0) * chebyshev_ratio(e, n - 1);
}

RecursionCheck whittaker0_table_check(std::uint32_t p, cplx lambda, const std::vector<cplx>& c, double tol) {
    if (c.size() < 4) throw PreconditionError("whittaker0_table_check: need c(0..N+1) with N >= 2");
    RecursionCheck r;
    r.ok = true;
    record(r, std::abs(c[0]) + std::abs(c[1]), tol);
    const double ip = 1.0 / p;
    for (std::size_t n = 2; n + 1 < c.size(); ++n) {
        const cplx lhs = lambda * c[n], a = ip * c[n - 1], b = c[n + 1];
        record(r, std::abs(lhs - a - b) / scale_of({lhs, a, b}), tol);
    }
    return r;
}

RecursionCheck whittaker0_recursion_check(std::uint32_t p, cplx theta, int N, double tol) {
    if (N < 3) throw PreconditionError("whittaker0_recursion_check: N >= 3");
    std::vector<cplx> c(N + 2);
    for (int n = 0; n <= N + 1; ++n) c[n] = whittaker0(p, n, theta);
    return whittaker0_table_check(p, spectral_eigenvalue(p, theta), c, tol);
}

namespace {

struct MellinSetup {
    cplx z;        // p^{-s}
    double rho;    // ratio of consecutive term bounds
};

MellinSetup mellin_setup(std::uint32_t p, cplx theta, cplx s) {
    const cplx e = std::exp(cplx(0, 1) * theta);
    const double R = std::max(std::abs(e), 1.0 / std::abs(e));
    const cplx z = std::exp(-s * std::log(static_cast<double>(p)));
    const double rho = R * std::abs(z) / std::sqrt(static_cast<double>(p));
    if (!(rho < 1)) throw PreconditionError("whittaker_mellin_check: series diverges at this s");
    return {z, rho};
}

// sum_{n > N} (n-1) rho^{n-2} |z|^2 bounds the dropped terms
double mellin_tail(const MellinSetup& m, int N) {
    const double r = m.rho;
    return std::norm(m.z) * std::pow(r, N - 1) * (N / (1 - r) + r / ((1 - r) * (1 - r)));
}

}  // namespace

int mellin_truncation(std::uint32_t p, cplx theta, cplx s) {
    const auto m = mellin_setup(p, theta, s);
    int N = 2;
    while (mellin_tail(m, N) >= 1e-12) {
        if (++N > 100000) throw PreconditionError("whittaker_mellin_check: convergence too slow");
    }
    return N;
}

MellinCheck whittaker_mellin_check(std::uint32_t p, cplx theta, cplx s, int N, double tol) {
    const auto m = mellin_setup(p, theta, s);
    MellinCheck out;
    out.N = N;
    out.tail_bound = mellin_tail(m, N);
    if (!(out.tail_bound < 1e-12)) throw PreconditionError("whittaker_mellin_check: truncation leaves tail >= 1e-12");
    cplx zn = m.z * m.z;
    for (int n = 2; n <= N; ++n, zn *= m.z) out.lhs += whittaker0(p, n, theta) * zn;
    const cplx e = std::exp(cplx(0, 1) * theta);
    const double sp = std::sqrt(static_cast<double>(p));
    // G(s + 1/2 + i gamma) = 1/(1 - p^{-s} e^{-i theta}/sqrt p), p^{i gamma} = e^{i theta}
    out.rhs = m.z * m.z / ((1.0 - m.z / (e * sp)) * (1.0 - m.z * e / sp));
    out.residual = std::abs(out.lhs - out.rhs);
    out.ok = out.residual < tol;
    return out;
}

namespace {

struct XiData {
    int val;        // v_infty(xi)
    int chi;        // (xi, varpi)_infty for unit xi
};

XiData xi_data(const PrimeModulus& F, SquareClass xi) {
    const bool unit = xi == SquareClass::One || xi == SquareClass::U;
    const bool nonsq = xi == SquareClass::U || xi == SquareClass::UPi;
    const RationalFunction eps(Poly::constant(F, nonsq ? F.smallest_non_square() : 1));
    return {unit ? 0 : 1, hilbert_int(eps, t_pow_neg(F, 1))};
}

cplx meta_value(double p, int n, cplx e, const XiData& x, int root_sign) {
    if (n < 1) return 0;
    const double delta = x.val == 0 ? 1 : 0;
    const double sign = (n % 2 == 0 || root_sign == 1) ? 1 : -1;
    // p sigma^n/(e - 1/e) [(1 - d chi/(e sqrt p)) (e/p)^n - (1 - d chi e/sqrt p)(1/(e p))^n]
    return sign * std::pow(p, 1 - n) *
           (chebyshev_ratio(e, n) - delta * x.chi / std::sqrt(p) * chebyshev_ratio(e, n - 1));
}

}  // namespace

cplx metaplectic_whittaker0(std::uint32_t p, int n, cplx gamma, SquareClass xi, int root_sign) {
    const auto& F = PrimeModulus::get(p);
    return meta_value(p, n, std::exp(cplx(0, 1) * gamma), xi_data(F, xi), root_sign);
}

RecursionCheck metaplectic_recursion_check(std::uint32_t p, cplx gamma, SquareClass xi, int N, double tol) {
    const auto& F = PrimeModulus::get(p);
    const auto x = xi_data(F, xi);
    const cplx e = std::exp(cplx(0, 1) * gamma);
    const double pd = p, sp = std::sqrt(pd);
    const cplx lam = pd * (e + 1.0 / e);
    const RationalFunction w = t_pow_neg(F, 1);
    // (varpi, varpi): root sign of varpi^{+-1} sqrt v relative to sqrt v
    const int ww = hilbert_int(w, w);
    RecursionCheck r;
    r.ok = true;
    for (int sigma : {1, -1}) {
        for (int n = 0; n <= N; ++n) {
            const int k = 2 * n + x.val;   // v_infty(a v) with a in the class of xi
            const cplx f = meta_value(pd, n, e, x, sigma);
            const cplx up = k >= 2 ? sigma * pd * pd * meta_value(pd, n + 1, e, x, sigma * ww) : cplx(0);
            const cplx mid = k == 2 ? sp * f * static_cast<double>(x.chi) : cplx(0);
            const cplx down = static_cast<double>(sigma) * meta_value(pd, n - 1, e, x, sigma * ww);
            const cplx lhs = lam * f;
            record(r, std::abs(lhs - up - mid - down) / scale_of({lhs, up, mid, down}), tol);
        }
    }
    return r;
}

cplx whittaker1(int n, cplx lambda) {
    if (n < 2) return 0;
    return std::pow(lambda, n - 2);
}

RecursionCheck whittaker1_recursion_check(cplx lambda, int N, double tol) {
    RecursionCheck r;
    r.ok = true;
    for (int n = -2; n <= N; ++n) {
        if (n < 2) {
            record(r, std::abs(whittaker1(n, lambda)), tol);
            continue;
        }
        const cplx a = whittaker1(n + 1, lambda), b = lambda * whittaker1(n, lambda);
        record(r, std::abs(a - b) / scale_of({a, b}), tol);
    }
    return r;
}

MellinCheck whittaker1_mellin_check(std::uint32_t p, cplx lambda, cplx s, double tol) {
    const cplx z = std::exp(-s * std::log(static_cast<double>(p)));
    const double q = std::abs(lambda * z);
    if (!(q < 1)) throw PreconditionError("whittaker1_mellin_check: series diverges at this s");
    MellinCheck out;
    int N = 2;
    auto tail = [&](int n) { return std::norm(z) * std::pow(q, n - 1) / (1 - q); };
    while (tail(N) >= 1e-12) ++N;
    out.N = N;
    out.tail_bound = tail(N);
    cplx zn = z * z;
    for (int n = 2; n <= N; ++n, zn *= z) out.lhs += whittaker1(n, lambda) * zn;
    out.rhs = z * z / (1.0 - lambda * z);
    out.residual = std::abs(out.lhs - out.rhs);
    out.ok = out.residual < tol;
    return out;
}

Depth1Report depth1_constraint_check(std::uint32_t p, int K) {
    if (K < 2) throw PreconditionError("depth1_constraint_check: K >= 2");
    const auto& F = PrimeModulus::get(p);
    const double sp = std::sqrt(static_cast<double>(p));
    Depth1Report rep;
    rep.support_consistent = true;

    // positions k = kmin..kmax for both upper (u) and lower (l) coefficients
    const int kmin = -2, kmax = K + 2, width = kmax - kmin + 1;
    auto iu = [&](int k) { return k - kmin; };
    auto il = [&](int k) { return width + k - kmin; };
    auto supported = [&](int idx) {
        if (idx < width) return idx + kmin >= 2;
        const int k = idx - width + kmin;
        return k >= 1 && k <= K;
    };

    for (Coeff c : {Coeff(1), F.smallest_non_square()}) {
        // a v represented by c T^{-k}
        auto av = [&](int k) { return RationalFunction(Poly::constant(F, c)) * t_pow_neg(F, k); };
        const RationalFunction T1(Poly::T(F)), T3(Poly::monomial(F, 1, 3));
        for (int sigma : {1, -1}) {
            Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * width, 2 * width);
            for (int k = kmin; k <= kmax; ++k) {
                // upper: w u_k = sum_{i != 0} (i/p) e(T^3 a i v) u_k + sigma l_{k-2}
                cplx g = 0;
                for (Coeff i = 1; i < p; ++i)
                    g += static_cast<double>(F.chi(i)) * add_char(RationalFunction(Poly::constant(F, i)) * T3 * av(k));
                A(iu(k), iu(k)) = g;
                if (k - 2 >= kmin) A(iu(k), il(k - 2)) = sigma;
                // lower: w l_k = sigma sum_{i} e(T a i v) u_{k+2}
                cplx s1 = 0;
                for (Coeff i = 0; i < p; ++i) s1 += add_char(RationalFunction(Poly::constant(F, i)) * T1 * av(k));
                if (k + 2 <= kmax) A(il(k), iu(k + 2)) = static_cast<double>(sigma) * s1;
            }
            std::vector<int> keep;
            for (int i = 0; i < 2 * width; ++i) {
                if (supported(i)) {
                    keep.push_back(i);
                    continue;
                }
                // an unsupported coefficient is zero, so its equation may not involve supported ones
                for (int j = 0; j < 2 * width; ++j)
                    if (supported(j) && std::abs(A(i, j)) > 1e-9) rep.support_consistent = false;
            }
            Eigen::MatrixXcd B(keep.size(), keep.size());
            for (std::size_t i = 0; i < keep.size(); ++i)
                for (std::size_t j = 0; j < keep.size(); ++j) B(i, j) = A(keep[i], keep[j]);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B, false);
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rep.eigenvalues.push_back(es.eigenvalues()[i]);
        }
    }
    bool all_sq = true, all_real = true;
    for (auto w : rep.eigenvalues) {
        all_sq = all_sq && std::abs(w * w - static_cast<double>(p)) < 1e-9;
        all_real = all_real && std::abs(w.imag()) < 1e-9;
        bool seen = false;
        for (double a : rep.admissible) seen = seen || std::abs(a - w.real()) < 1e-8;
        if (!seen) rep.admissible.push_back(w.real());
    }
    std::sort(rep.admissible.begin(), rep.admissible.end());
    rep.ok = rep.support_consistent && all_sq && all_real && rep.admissible.size() == 2 &&
             std::abs(rep.admissible[0] + sp) < 1e-9 && std::abs(rep.admissible[1] - sp) < 1e-9;
    return rep;
}

CoeffFamily apply_metaplectic_hecke(const CoeffFamily& Fam, const Poly& P) {
    if (!P.is_monic() || !is_irreducible(P)) throw PreconditionError("apply_metaplectic_hecke: P must be monic irreducible");
    const auto& F = P.field();
    const FinitePlace place(P);
    const int d = P.degree();
    const double normP = std::pow(static_cast<double>(F.p()), d);
    const cplx g1 = gauss_sum_rational(Poly::constant(F, 1), P).value;
    const Poly P2 = P * P;

    auto get = [&](const Poly& a, int m) {
        auto it = Fam.find({a, m});
        return it == Fam.end() ? cplx(0) : it->second;
    };
    std::vector<std::pair<Poly, int>> keys;
    for (const auto& [k, val] : Fam) {
        const auto& [b, n] = k;
        if (n % 2 != 0) throw PreconditionError("apply_metaplectic_hecke: v must be a square, even valuation");
        keys.push_back(k);
        keys.push_back({b * P2, n + 2 * d});
        if (divides(P2, b)) keys.push_back({b / P2, n - 2 * d});
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    CoeffFamily out;
    for (const auto& [a, m] : keys) {
        const double s = hilbert_int(RationalFunction(P), t_pow_neg(F, m / 2));
        cplx v = s * normP * normP * get(a * P2, m + 2 * d);
        if (!divides(P, a)) v += g1 * static_cast<double>(to_int(legendre(a, place))) * get(a, m);
        if (divides(P2, a)) v += s * get(a / P2, m - 2 * d);
        if (v != cplx(0)) out[{a, m}] = v;
    }
    return out;
}

CoeffFamily unary_theta_family(const PrimeModulus& F, int max_l_deg, int max_m) {
    CoeffFamily out;
    const double p = F.p();
    std::uint64_t total = 1;
    for (int i = 0; i <= max_l_deg; ++i) total *= F.p();
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        const Poly l = poly_from_index(F, max_l_deg + 1, idx);
        const Poly a = l * l;
        for (int m = 0; m <= max_m; m += 2) {
            if (m < a.degree()) continue;
            const int s = hilbert_int(t_pow_neg(F, m / 2), t_pow_neg(F, 1));
            const double sign = (m / 2) % 2 == 0 ? 1 : s;
            out[{a, m}] += sign * std::pow(p, -m / 4.0);
        }
    }
    return out;
}

EigenReport unary_theta_eigen_check(const Poly& P, int max_l_deg, int max_m, double tol) {
    const auto& F = P.field();
    const int d = P.degree();
    if (max_l_deg < d || max_m < 2 * d) throw PreconditionError("unary_theta_eigen_check: family too small for P");
    const auto fam = unary_theta_family(F, max_l_deg, max_m);
    const auto out = apply_metaplectic_hecke(fam, P);
    auto get = [](const CoeffFamily& f, const std::pair<Poly, int>& k) {
        auto it = f.find(k);
        return it == f.end() ? cplx(0) : it->second;
    };
    std::vector<std::pair<Poly, int>> keys;
    auto inner = [&](const std::pair<Poly, int>& k) {
        return k.first.degree() <= 2 * (max_l_deg - d) && k.second >= 0 && k.second <= max_m - 2 * d;
    };
    for (const auto& [k, v] : fam)
        if (inner(k)) keys.push_back(k);
    for (const auto& [k, v] : out)
        if (inner(k) && !fam.count(k)) keys.push_back(k);

    EigenReport rep;
    for (const auto& k : keys) {
        const cplx f = get(fam, k);
        if (f != cplx(0)) {
            rep.eigenvalue = get(out, k) / f;
            break;
        }
    }
    for (const auto& k : keys) {
        const cplx want = rep.eigenvalue * get(fam, k), got = get(out, k);
        rep.max_residual = std::max(rep.max_residual, std::abs(got - want) / scale_of({want, got}));
        ++rep.checked;
    }
    rep.is_eigen = rep.checked > 0 && rep.max_residual < tol;
    return rep;
}

HeckeTable hecke_table_from_recursion(const PrimeModulus& F, int max_deg,
                                      const std::function<cplx(const Poly&)>& lambda_at_prime) {
    HeckeTable t;
    t.p = F.p();
    t.max_deg = max_deg;
    std::map<Poly, cplx> at_prime;
    auto prime_power = [&](const Poly& P, int e) {
        auto it = at_prime.find(P);
        if (it == at_prime.end()) it = at_prime.emplace(P, lambda_at_prime(P)).first;
        const cplx lp = it->second;
        const double inv = std::pow(static_cast<double>(F.p()), -P.degree());
        cplx prev = 1, cur = lp;
        if (e == 0) return prev;
        for (int k = 1; k < e; ++k) {
            const cplx next = lp * cur - inv * prev;
            prev = cur;
            cur = next;
        }
        return cur;
    };
    t.lambda[Poly::constant(F, 1)] = 1;
    for (int deg = 1; deg <= max_deg; ++deg)
        for_each_monic(F, deg, [&](const Poly& a) {
            cplx v = 1;
            for (const auto& [P, e] : factor(a)) v *= prime_power(P, e);
            t.lambda[a] = v;
        });
    return t;
}

namespace {

cplx table_at(const HeckeTable& t, const Poly& a) {
    auto it = t.lambda.find(a);
    if (it == t.lambda.end()) throw PreconditionError("hecke table: " + a.to_string() + " outside the table");
    return it->second;
}

void check_prime(const Poly& P) {
    if (!P.is_monic() || !is_irreducible(P)) throw PreconditionError("hecke check: P must be monic irreducible");
}

}  // namespace

bool integral_hecke_relation_check(const HeckeTable& t, const Poly& P, const Poly& a, double tol) {
    check_prime(P);
    const auto& F = P.field();
    const cplx one = table_at(t, Poly::constant(F, 1));
    const cplx lp = table_at(t, P) / one;
    const cplx lhs = lp * table_at(t, a);
    const cplx x = table_at(t, a * P);
    const cplx y = divides(P, a) ? std::pow(static_cast<double>(F.p()), -P.degree()) * table_at(t, a / P) : cplx(0);
    return std::abs(lhs - x - y) <= tol * scale_of({lhs, x, y});
}

bool integral_hecke_multiplicativity_check(const HeckeTable& t, const Poly& P, const Poly& a, double tol) {
    check_prime(P);
    if (!gcd(a, P).is_one()) throw PreconditionError("integral_hecke_multiplicativity_check: gcd(a, P) must be 1");
    const auto& F = P.field();
    const cplx lp = table_at(t, P) / table_at(t, Poly::constant(F, 1));
    const cplx lhs = table_at(t, a * P), rhs = lp * table_at(t, a);
    return std::abs(lhs - rhs) <= tol * scale_of({lhs, rhs});
}

}  // namespace arqft
