#pragma once

#include "arqft/field.hpp"
#include "arqft/ternary.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace arqft {

enum class SymbolValue : int { Minus = -1, Zero = 0, Plus = 1 };

inline int to_int(SymbolValue s) { return static_cast<int>(s); }
inline SymbolValue symbol_of(int v) { return v > 0 ? SymbolValue::Plus : v < 0 ? SymbolValue::Minus : SymbolValue::Zero; }
inline SymbolValue operator*(SymbolValue a, SymbolValue b) { return symbol_of(to_int(a) * to_int(b)); }

class FinitePlace {
public:
    // throws unless P is monic irreducible
    explicit FinitePlace(Poly P);
    const Poly& P() const { return P_; }
    int degree() const { return P_.degree(); }

private:
    Poly P_;
};

SymbolValue legendre(const Poly& d, const FinitePlace& P);
// reciprocity descent; jacobi(d, unit) = +1; throws on c = 0
SymbolValue jacobi(const Poly& d, const Poly& c);
// same descent on raw coefficient arrays (lowest first, no trailing zeros), deg < 96
int jacobi_coeffs(const Coeff* d, int deg_d, const Coeff* c, int deg_c, const PrimeModulus& F);
// product of Legendre symbols over the factorization of c
SymbolValue jacobi_factored(const Poly& d, const Poly& c);

SymbolValue hilbert_infty(const RationalFunction& x, const RationalFunction& y);
SymbolValue hilbert_finite(const RationalFunction& x, const RationalFunction& y, const FinitePlace& P);

// throws std::invalid_argument on non-coprime input
bool verify_reciprocity(const Poly& a, const Poly& b);
bool verify_product_formula(const RationalFunction& a, const RationalFunction& b);

struct GaussSumValue {
    enum class Provenance { DirectSum, ClosedForm };
    std::complex<double> value;
    Provenance provenance = Provenance::DirectSum;
    // value = rational_part + sqrt_part * sqrt(p) when recognised
    std::optional<std::pair<long long, long long>> exact;
};

// sum over j mod D of jacobi(j, D) e(T^2 a j / D)
GaussSumValue gauss_sum_rational(const Poly& a, const Poly& D);
// tau(psi o Tr, chi o N) over F_{p^s}
GaussSumValue finite_field_gauss(const PrimeModulus& F, int s);
bool hasse_davenport_check(const PrimeModulus& F, int s, double tol = 1e-9);

struct KohnenResult {
    enum class Status { Found, CertifiedZero, Exhausted };
    Status status = Status::Found;
    SymbolValue value = SymbolValue::Zero;
    std::optional<Vec3> witness;
    int witnesses_checked = 0;
    // every checked witness gave the same symbol
    bool consistent = true;
};

// jacobi(Q(v0), D) for the first v0 with gcd(Q(v0), D) = 1; search order e1, e2, e3, then
// vectors by increasing coordinate degree up to deg(disc Q) + 2
KohnenResult kohnen_symbol(const TernaryForm& Q, const Poly& D, int witnesses = 10,
                           std::uint64_t budget = 2'000'000);

struct Mat2 {
    RationalFunction a, b, c, d;
};

Mat2 mat2_mul(const Mat2& x, const Mat2& y);
RationalFunction mat2_det(const Mat2& m);

struct MetaplecticElement {
    Mat2 g;
    int delta = 1;
};

// throws unless det g = 1
MetaplecticElement make_metaplectic(Mat2 g, int delta = 1);
MetaplecticElement metaplectic_mul(const MetaplecticElement& x, const MetaplecticElement& y);
RationalFunction cocycle_x(const Mat2& g);
SymbolValue cocycle_eps(const Mat2& g1, const Mat2& g2);
// splitting over SL_2(O_infty)
SymbolValue kappa_split(const Mat2& g);
// splitting over SL_2(F_p[T]); (d/c) with (d/0) := +1
SymbolValue eta_split(const Mat2& g);

}  // namespace arqft
