#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace arqft {

using Coeff = std::uint32_t;

// degree of the zero polynomial
inline constexpr int kZeroDegree = -1;

class PrimeModulus {
public:
    // throws std::invalid_argument unless p is prime and p = 1 mod 4
    static const PrimeModulus& get(std::uint32_t p);

    std::uint32_t p() const { return p_; }

    Coeff reduce(std::int64_t x) const {
        std::int64_t r = x % static_cast<std::int64_t>(p_);
        return static_cast<Coeff>(r < 0 ? r + p_ : r);
    }
    Coeff add(Coeff a, Coeff b) const { Coeff s = a + b; return s >= p_ ? s - p_ : s; }
    Coeff sub(Coeff a, Coeff b) const { return a >= b ? a - b : a + p_ - b; }
    Coeff neg(Coeff a) const { return a == 0 ? 0 : p_ - a; }
    Coeff mul(Coeff a, Coeff b) const {
        return static_cast<Coeff>(static_cast<std::uint64_t>(a) * b % p_);
    }
    Coeff inv(Coeff a) const;
    Coeff pow(Coeff a, std::uint64_t e) const;

    // quadratic character of F_p: 0, +1, -1
    int chi(Coeff a) const { return chi_[a]; }
    Coeff smallest_non_square() const { return non_square_; }
    std::optional<Coeff> sqrt(Coeff a) const;

private:
    explicit PrimeModulus(std::uint32_t p);
    std::uint32_t p_;
    Coeff non_square_ = 0;
    std::vector<std::int8_t> chi_;
    std::vector<Coeff> inv_;
    std::vector<Coeff> sqrt_;
};

bool is_prime(std::uint64_t n);

class Poly {
public:
    explicit Poly(const PrimeModulus& F) : F_(&F) {}
    Poly(const PrimeModulus& F, std::vector<Coeff> coeffs);
    static Poly constant(const PrimeModulus& F, std::int64_t c);
    static Poly monomial(const PrimeModulus& F, std::int64_t c, int k);
    static Poly T(const PrimeModulus& F) { return monomial(F, 1, 1); }
    // coefficients given as signed integers, lowest first
    static Poly from_ints(const PrimeModulus& F, std::initializer_list<std::int64_t> cs);

    const PrimeModulus& field() const { return *F_; }
    std::uint32_t p() const { return F_->p(); }

    int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    Coeff lead() const { return c_.empty() ? 0 : c_.back(); }
    Coeff coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0; }
    const std::vector<Coeff>& coeffs() const { return c_; }

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly scaled(Coeff s) const;
    Poly shifted(int k) const;  // times T^k, k >= 0
    Poly truncated(int n) const;  // mod T^n

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    // degree first, then coefficients from the top; the enumeration order
    friend bool operator<(const Poly& a, const Poly& b);

    Coeff evaluate(Coeff x) const;
    Poly derivative() const;
    Poly monic() const;
    // Taylor shift f(T + a)
    Poly taylor_shift(Coeff a) const;

    std::string to_string() const;

private:
    void trim() { while (!c_.empty() && c_.back() == 0) c_.pop_back(); }
    const PrimeModulus* F_;
    std::vector<Coeff> c_;
};

std::ostream& operator<<(std::ostream& os, const Poly& a);

// throws std::domain_error on b = 0
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
bool divides(const Poly& d, const Poly& a);
// monic gcd (zero if both zero)
Poly gcd(const Poly& a, const Poly& b);
// returns (g, s, t) with s*a + t*b = g monic
std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& a, std::uint64_t e, const Poly& m);
Poly pow(const Poly& a, int e);
// p^deg a, 0 for zero; throws std::overflow_error past 2^63
std::uint64_t norm(const Poly& a);

bool is_squarefree(const Poly& a);
bool is_irreducible(const Poly& a);
// monic irreducible factors with multiplicity, sorted; the unit is lead(a)
std::vector<std::pair<Poly, int>> factor(const Poly& a);
// v_P(a) for a != 0
int valuation(const Poly& a, const Poly& P);

// index of a monic polynomial of degree d (c0 least significant digit)
std::uint64_t monic_index(const Poly& a);
Poly monic_from_index(const PrimeModulus& F, int d, std::uint64_t idx);
// all polynomials of degree < n (zero included) by base-p index
Poly poly_from_index(const PrimeModulus& F, int n, std::uint64_t idx);
std::uint64_t poly_index(const Poly& a);

// p^d monic polynomials of degree d in index order
std::vector<Poly> enumerate_monic(const PrimeModulus& F, int d);
void for_each_monic(const PrimeModulus& F, int d, const std::function<void(const Poly&)>& fn);
std::vector<Poly> monic_irreducibles(const PrimeModulus& F, int d);

// text format c0+c1*T+c2*T^2; also accepts "1T", "T^3", "-", spaces
Poly parse_poly(const PrimeModulus& F, std::string_view text);

class RationalFunction {
public:
    explicit RationalFunction(const PrimeModulus& F) : num_(F), den_(Poly::constant(F, 1)) {}
    RationalFunction(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.field(), 1)) {}
    RationalFunction(Poly num, Poly den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    const PrimeModulus& field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    // deg num - deg den
    int degree() const;
    int valuation_infty() const { return -degree(); }
    Coeff lead() const;
    // (v_P(f), unit part reduced mod P)
    std::pair<int, Poly> split_at(const Poly& P) const;

    RationalFunction operator-() const { return RationalFunction(-num_, den_); }
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }
    RationalFunction inverse() const;

    std::string to_string() const;

private:
    Poly num_, den_;
};

struct LaurentPrefix {
    int valuation = 0;             // v_infty
    std::vector<Coeff> coeffs;     // coefficient of T^{-(valuation + k)}
};

// first N terms of the expansion in T^{-1}; throws on f = 0 or N < 1
LaurentPrefix laurent_at_infinity(const RationalFunction& f, int N);
// T^1 coefficient of the expansion at infinity
Coeff additive_char(const RationalFunction& f);
// T^1 coefficient of the polynomial part of num/den
Coeff additive_char_quotient(const Poly& num, const Poly& den);

// F_p[T]/(P) for monic irreducible P
class ResidueField {
public:
    explicit ResidueField(Poly P);
    const Poly& modulus() const { return P_; }
    int degree() const { return P_.degree(); }
    const PrimeModulus& base() const { return P_.field(); }
    std::uint64_t order() const { return order_; }

    Poly reduce(const Poly& a) const { return a % P_; }
    Poly mul(const Poly& a, const Poly& b) const { return mulmod(a, b, P_); }
    Poly pow(const Poly& a, std::uint64_t e) const { return powmod(a, e, P_); }
    Poly inv(const Poly& a) const;
    // Euler criterion; 0 on the zero class
    int legendre(const Poly& a) const;
    Coeff trace(const Poly& a) const;
    Coeff norm(const Poly& a) const;
    // every element, index order
    std::vector<Poly> elements() const;

private:
    Poly P_;
    std::uint64_t order_;
};

}  // namespace arqft
