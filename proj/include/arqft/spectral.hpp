#pragma once

#include "arqft/field.hpp"
#include "arqft/qform.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace arqft {

using cplx = std::complex<double>;

// lambda = p^{-1/2} (e^{i theta} + e^{-i theta})
cplx spectral_eigenvalue(std::uint32_t p, cplx theta);

// (q^m - q^{-m}) / (q - q^{-1}), the finite sum near q = q^{-1}
cplx chebyshev_ratio(cplx q, int m);

// depth 0 Whittaker value at v_infty(y) = n; theta may be complex
cplx whittaker0(std::uint32_t p, int n, cplx theta);

struct RecursionCheck {
    bool ok = false;
    double max_residual = 0;   // relative to max(1, |terms|)
    int checked = 0;
};
// lambda c(n) = c(n-1)/p + c(n+1) for 2 <= n <= N, and c(n) = 0 below 2; c[n] holds c(n), n = 0..N+1
RecursionCheck whittaker0_table_check(std::uint32_t p, cplx lambda, const std::vector<cplx>& c, double tol = 1e-10);
RecursionCheck whittaker0_recursion_check(std::uint32_t p, cplx theta, int N, double tol = 1e-10);

struct MellinCheck {
    cplx lhs, rhs;
    double residual = 0;
    double tail_bound = 0;
    int N = 0;
    bool ok = false;
};
// sum_{n=2}^{N} W(T^{-n}) p^{-ns} against p^{-2s} G(s+1/2+i gamma) G(s+1/2-i gamma), G(s) = 1/(1-p^{-s});
// PreconditionError when the series diverges or the tail past N is not below 1e-12
MellinCheck whittaker_mellin_check(std::uint32_t p, cplx theta, cplx s, int N, double tol = 1e-9);
// smallest N whose tail bound is below 1e-12
int mellin_truncation(std::uint32_t p, cplx theta, cplx s);

// metaplectic depth 0 value at xi v with v_infty(sqrt v) = n; root_sign = (varpi, sqrt v)_infty
cplx metaplectic_whittaker0(std::uint32_t p, int n, cplx gamma, SquareClass xi, int root_sign = 1);
// three-term relation with the Gauss-sum middle term, both root signs, 0 <= n <= N
RecursionCheck metaplectic_recursion_check(std::uint32_t p, cplx gamma, SquareClass xi, int N, double tol = 1e-10);

// [n >= 2] lambda^{n-2}
cplx whittaker1(int n, cplx lambda);
// W(n+1) = lambda W(n) above the support edge, zero below it
RecursionCheck whittaker1_recursion_check(cplx lambda, int N, double tol = 1e-10);
// sum_n W(n) p^{-ns} = p^{-2s} / (1 - lambda p^{-s})
MellinCheck whittaker1_mellin_check(std::uint32_t p, cplx lambda, cplx s, double tol = 1e-9);

struct Depth1Report {
    std::vector<cplx> eigenvalues;      // every block, every sign choice
    std::vector<double> admissible;     // distinct values, ascending
    bool support_consistent = false;    // equations at unsupported positions vanish
    bool ok = false;                    // admissible == {-sqrt p, sqrt p}
};
// eigenvalues of the coupled upper/lower relations restricted to supported coefficients,
// character sums evaluated directly, valuations up to K
Depth1Report depth1_constraint_check(std::uint32_t p, int K = 8);

// F_a(v) keyed by (a, v_infty(v)); v is taken as T^{-m} with m even
using CoeffFamily = std::map<std::pair<Poly, int>, cplx>;

// lambda F_a(v) = (P, sqrt v)|P|^2 F_{aP^2}(P^{-2}v) + G_1(P)[P !| a](a/P) F_a(v) + (P, sqrt v) F_{a/P^2}(P^2 v)
CoeffFamily apply_metaplectic_hecke(const CoeffFamily& F, const Poly& P);

// sum over nonzero l of degree <= max_l_deg, F_{l^2}(v) += |v|^{1/4} (sqrt v, varpi)^{m/2} [v_infty(l^2 v) >= 0]
CoeffFamily unary_theta_family(const PrimeModulus& F, int max_l_deg, int max_m);

struct EigenReport {
    bool is_eigen = false;
    cplx eigenvalue;
    double max_residual = 0;
    int checked = 0;
};
// compares on keys whose three inputs stay inside the truncated family
EigenReport unary_theta_eigen_check(const Poly& P, int max_l_deg = 3, int max_m = 10, double tol = 1e-9);

struct HeckeTable {
    std::uint32_t p = 0;
    int max_deg = 0;
    std::map<Poly, cplx> lambda;   // monic a
};
// lambda(1) = 1, lambda(P^{k+1}) = lambda_P lambda(P^k) - |P|^{-1} lambda(P^{k-1}), multiplicative over coprime parts
HeckeTable hecke_table_from_recursion(const PrimeModulus& F, int max_deg,
                                      const std::function<cplx(const Poly&)>& lambda_at_prime);
// lambda_P lambda(a) = lambda(aP) + |P|^{-1} lambda(a/P)
bool integral_hecke_relation_check(const HeckeTable& t, const Poly& P, const Poly& a, double tol = 1e-10);
// lambda(aP) = lambda_P lambda(a) with lambda_P = lambda(P) / lambda(1); needs gcd(a, P) = 1
bool integral_hecke_multiplicativity_check(const HeckeTable& t, const Poly& P, const Poly& a, double tol = 1e-10);

struct IdentityResult {
    std::string name;
    std::string grid;
    double max_residual = 0;
    long cases = 0;
    long failures = 0;
    bool pass() const { return failures == 0 && cases > 0; }
};
struct IdentityReport {
    std::uint64_t seed = 0;
    std::vector<IdentityResult> results;
    cplx unary_theta_eigenvalue;   // recorded, not asserted
    bool pass() const;
};
IdentityReport run_identity_suite(std::uint64_t seed, bool include_symbols = true);

}  // namespace arqft
