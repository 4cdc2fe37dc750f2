#pragma once

#include "arqft/cache.hpp"
#include "arqft/exact.hpp"
#include "arqft/field.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace arqft {

struct QuadraticDiscriminant {
    Poly D;
    Coeff unit = 1;          // leading coefficient
    int degree = 0;
    bool even_degree = false;
    int genus = 0;           // floor(deg/2), the "degree 2g or 2g+1" convention
    int curve_genus = 0;     // genus of y^2 = D, floor((deg-1)/2)

    // throws PreconditionError unless D is square-free of degree >= 1
    static QuadraticDiscriminant make(Poly D);
};

// integer polynomial in t = p^{-s}, lowest first
struct LPolynomial {
    std::uint32_t p = 0;
    std::vector<long long> coeffs{1};

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    long long operator[](int i) const { return i >= 0 && i <= degree() ? coeffs[i] : 0; }
    friend bool operator==(const LPolynomial&, const LPolynomial&) = default;
};

// sum over monic a of degree n of jacobi(D, a), by enumeration
long long char_sum_direct(const Poly& D, int n);
// same sum from the L-polynomial for n < deg D and from residue-class counting for n >= deg D;
// memoized by (p, D, n)
long long char_sum(const QuadraticDiscriminant& D, int n);
// (p-1)[deg D even] chi(u)^n p^{n-N} sum_{m<N} chi(u)^m c_m for n >= N = deg D
long long char_sum_tail(const QuadraticDiscriminant& D, const LPolynomial& L, int n);

// Euler product over monic irreducibles of degree < deg D; throws CheckFailure if the
// degree-N character sum fails to vanish
LPolynomial l_polynomial(const QuadraticDiscriminant& D);

struct PurePart {
    LPolynomial weil;
    int stripped_plus = 0;   // powers of (1 - t) removed
    int stripped_minus = 0;  // powers of (1 + t) removed
};
PurePart pure_part(const LPolynomial& L);

struct FunctionalEquation {
    bool holds = false;
    int sign = 0;
};
// a_{2g-i} = sign p^{g-i} a_i; throws PreconditionError on odd degree
FunctionalEquation functional_equation_check(const LPolynomial& pure);

struct ZeroSet {
    std::vector<std::complex<double>> roots;
    // root = p^{-1/2} e^{i theta}, ascending in (-pi, pi]
    std::vector<double> angles;
};
// square-free decomposition over Q, companion-matrix eigenvalues, Newton polish;
// throws CheckFailure on non-convergence
ZeroSet zeros(const LPolynomial& pure, double tol = 1e-8);
bool rh_check(const ZeroSet& Z, std::uint32_t p, double tol = 1e-8);
// conjugation and unit-circle inversion closure of the normalized zeros
bool zero_closure_check(const ZeroSet& Z, std::uint32_t p, double tol = 1e-8);

struct EdgeValues {
    double central = 0;   // L at t = p^{-1/2}
    double edge = 0;      // L at t = 1/p
    Rational edge_exact;
};
EdgeValues central_edge_values(const LPolynomial& L);
// exp(2g / log_p g + 4 sqrt(p g)), g >= 2
double central_bound(int g, std::uint32_t p);

struct BoundReport {
    int g = 0;
    double central = 0;
    double bound = 0;
    bool applies = false;   // g >= 2
    bool holds = true;
    double edge = 0;
    // L(1) (log_p g)^3 and L(1) / (log_p g)^3; NaN below g = 2
    double window_low = 0, window_high = 0;
};
BoundReport bound_checks(const QuadraticDiscriminant& D, const LPolynomial& L);

// sum of alpha_i^r, alpha_i = e^{-i theta_i}; real up to rounding by conjugation closure
std::complex<double> power_sum(const ZeroSet& Z, int r);
double star_discrepancy(std::vector<double> u);
// max |L(t)| on |t| = p^{-1/2}: 4096 samples then golden-section refinement around the best
double max_on_circle(const LPolynomial& L);

struct FamilyRow {
    Poly D;
    LPolynomial L;
    PurePart pure;
    FunctionalEquation fe;
    ZeroSet zs;
    bool rh = false;
    bool closure = false;
    EdgeValues values;
    BoundReport bound;
    double max_circle = 0;
    double discrepancy = 0;   // star discrepancy of this row's angles
};

struct FamilyOptions {
    std::size_t sample = 0;   // 0 means the full family
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double tol = 1e-8;
    bool with_max = true;
};

std::vector<Poly> squarefree_monic(const PrimeModulus& F, int d);
// seeded sample without replacement, returned in enumeration order
std::vector<Poly> sample_squarefree_monic(const PrimeModulus& F, int d, std::size_t n, std::uint64_t seed);

FamilyRow analyze(const Poly& D, const LPolynomial& L, double tol = 1e-8, bool with_max = true);
// L-polynomials of the family members; cached through `cache` when enabled
std::vector<LPolynomial> family_l_polynomials(const std::vector<Poly>& Ds, unsigned workers, const DiskCache& cache);
std::vector<FamilyRow> family_rows(const PrimeModulus& F, int d, const FamilyOptions& opt, const DiskCache& cache);

struct FamilyStats {
    int degree = 0;
    std::size_t sample_size = 0;
    std::size_t angle_count = 0;
    double discrepancy = 0;
    double max_M = 0;
    double min_central = 0, max_central = 0;
    std::size_t rh_failures = 0, fe_failures = 0, bound_violations = 0, bound_checked = 0;
};
FamilyStats family_stats(int degree, const std::vector<FamilyRow>& rows);
double family_discrepancy(const std::vector<FamilyRow>& rows);

std::string csv_header();
std::string csv_row(const FamilyRow& r);

}  // namespace arqft
