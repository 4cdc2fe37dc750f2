#include "arqft/field.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace arqft {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimeModulus::PrimeModulus(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p % 4 != 1)
        throw std::invalid_argument("p must be a prime congruent to 1 mod 4, got " + std::to_string(p));
    if (p > (1u << 20)) throw std::invalid_argument("p too large for table-driven F_p");
    chi_.assign(p, -1);
    sqrt_.assign(p, 0);
    chi_[0] = 0;
    std::vector<bool> seen(p, false);
    for (Coeff x = 1; x < p; ++x) {
        Coeff s = mul(x, x);
        chi_[s] = 1;
        if (!seen[s]) {
            seen[s] = true;
            sqrt_[s] = x;
        }
    }
    for (Coeff x = 2; x < p; ++x)
        if (chi_[x] == -1) {
            non_square_ = x;
            break;
        }
    inv_.assign(p, 0);
    for (Coeff x = 1; x < p; ++x) inv_[x] = pow(x, p - 2);
}

const PrimeModulus& PrimeModulus::get(std::uint32_t p) {
    static std::mutex mu;
    static std::map<std::uint32_t, std::unique_ptr<PrimeModulus>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find(p);
    if (it != registry.end()) return *it->second;
    auto made = std::unique_ptr<PrimeModulus>(new PrimeModulus(p));
    auto& ref = *made;
    registry.emplace(p, std::move(made));
    return ref;
}

Coeff PrimeModulus::inv(Coeff a) const {
    if (a == 0) throw std::domain_error("inverse of zero in F_p");
    if (!inv_.empty()) return inv_[a];
    return pow(a, p_ - 2);
}

Coeff PrimeModulus::pow(Coeff a, std::uint64_t e) const {
    std::uint64_t r = 1, x = a % p_;
    while (e) {
        if (e & 1) r = r * x % p_;
        x = x * x % p_;
        e >>= 1;
    }
    return static_cast<Coeff>(r);
}

std::optional<Coeff> PrimeModulus::sqrt(Coeff a) const {
    if (a == 0) return Coeff{0};
    if (chi_[a] != 1) return std::nullopt;
    return sqrt_[a];
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const PrimeModulus& F, std::vector<Coeff> coeffs) : F_(&F), c_(std::move(coeffs)) {
    for (auto& c : c_) c %= F.p();
    trim();
}

Poly Poly::constant(const PrimeModulus& F, std::int64_t c) {
    return Poly(F, {F.reduce(c)});
}

Poly Poly::monomial(const PrimeModulus& F, std::int64_t c, int k) {
    std::vector<Coeff> v(k + 1, 0);
    v[k] = F.reduce(c);
    return Poly(F, std::move(v));
}

Poly Poly::from_ints(const PrimeModulus& F, std::initializer_list<std::int64_t> cs) {
    std::vector<Coeff> v;
    for (auto c : cs) v.push_back(F.reduce(c));
    return Poly(F, std::move(v));
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& c : r.c_) c = F_->neg(c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_->add(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_->sub(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field());
    const std::uint64_t p = a.p();
    std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (!a.c_[i]) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) {
            acc[i + j] += static_cast<std::uint64_t>(a.c_[i]) * b.c_[j];
            if (acc[i + j] >= (1ull << 62)) acc[i + j] %= p;
        }
    }
    std::vector<Coeff> out(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<Coeff>(acc[i] % p);
    return Poly(a.field(), std::move(out));
}

Poly Poly::scaled(Coeff s) const {
    if (s % p() == 0) return Poly(*F_);
    Poly r(*this);
    for (auto& c : r.c_) c = F_->mul(c, s);
    return r;
}

Poly Poly::shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    Poly r(*F_);
    r.c_.assign(k, 0);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
}

Poly Poly::truncated(int n) const {
    Poly r(*this);
    if (static_cast<int>(r.c_.size()) > n) r.c_.resize(std::max(n, 0));
    r.trim();
    return r;
}

bool operator<(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i)
        if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
}

Coeff Poly::evaluate(Coeff x) const {
    std::uint64_t r = 0;
    for (int i = degree(); i >= 0; --i) r = (r * x + c_[i]) % p();
    return static_cast<Coeff>(r);
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly(*F_);
    std::vector<Coeff> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = F_->mul(c_[i], static_cast<Coeff>(i % p()));
    return Poly(*F_, std::move(d));
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return scaled(F_->inv(lead()));
}

Poly Poly::taylor_shift(Coeff a) const {
    // Horner in the ring: f(T + a)
    Poly x = Poly::from_ints(*F_, {static_cast<std::int64_t>(a), 1});
    Poly r(*F_);
    for (int i = degree(); i >= 0; --i) r = r * x + Poly::constant(*F_, c_[i]);
    return r;
}

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = 0; i <= degree(); ++i) {
        if (i) s += '+';
        s += std::to_string(c_[i]);
        if (i == 1) s += "*T";
        else if (i > 1) s += "*T^" + std::to_string(i);
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const Poly& a) { return os << a.to_string(); }

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    const PrimeModulus& F = a.field();
    if (a.degree() < b.degree()) return {Poly(F), a};
    std::vector<Coeff> r = a.coeffs();
    const auto& bc = b.coeffs();
    const int db = b.degree();
    const Coeff ib = F.inv(b.lead());
    std::vector<Coeff> q(a.degree() - db + 1, 0);
    for (int i = a.degree(); i >= db; --i) {
        Coeff c = r[i];
        if (!c) continue;
        Coeff f = F.mul(c, ib);
        q[i - db] = f;
        for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(f, bc[j]));
    }
    r.resize(db);
    return {Poly(F, std::move(q)), Poly(F, std::move(r))};
}

Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

bool divides(const Poly& d, const Poly& a) { return (a % d).is_zero(); }

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) {
    const PrimeModulus& F = a.field();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::constant(F, 1), s1(F), t0(F), t1 = Poly::constant(F, 1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Coeff il = F.inv(r0.lead());
    return {r0.scaled(il), s0.scaled(il), t0.scaled(il)};
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly powmod(const Poly& a, std::uint64_t e, const Poly& m) {
    Poly r = Poly::constant(a.field(), 1) % m, x = a % m;
    while (e) {
        if (e & 1) r = mulmod(r, x, m);
        e >>= 1;
        if (e) x = mulmod(x, x, m);
    }
    return r;
}

Poly pow(const Poly& a, int e) {
    Poly r = Poly::constant(a.field(), 1), x = a;
    while (e > 0) {
        if (e & 1) r = r * x;
        e >>= 1;
        if (e) x = x * x;
    }
    return r;
}

std::uint64_t norm(const Poly& a) {
    if (a.is_zero()) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < a.degree(); ++i) {
        if (r > (std::uint64_t{1} << 63) / a.p()) throw std::overflow_error("norm overflow");
        r *= a.p();
    }
    return r;
}

bool is_squarefree(const Poly& a) {
    if (a.degree() <= 0) return true;
    return gcd(a, a.derivative()).degree() == 0;
}

namespace {

// x^{p^k} mod m by repeated Frobenius
Poly frobenius(const Poly& x, int k, const Poly& m) {
    Poly r = x % m;
    for (int i = 0; i < k; ++i) r = powmod(r, r.p(), m);
    return r;
}

std::vector<int> prime_divisors(int n) {
    std::vector<int> out;
    for (int d = 2; d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    return out;
}

}  // namespace

bool is_irreducible(const Poly& a) {
    if (a.degree() < 1) throw std::invalid_argument("is_irreducible: constant input");
    const int n = a.degree();
    if (n == 1) return true;
    const Poly f = a.monic();
    const Poly X = Poly::T(a.field());
    if (frobenius(X, n, f) != X % f) return false;
    for (int q : prime_divisors(n)) {
        Poly h = frobenius(X, n / q, f) - X;
        if (gcd(h, f).degree() != 0) return false;
    }
    return true;
}

namespace {

// p-th root of a polynomial in T^p (coefficients fixed by Frobenius on F_p)
Poly pth_root(const Poly& f) {
    const std::uint32_t p = f.p();
    std::vector<Coeff> c;
    for (int i = 0; i <= f.degree(); i += p) c.push_back(f.coeff(i));
    return Poly(f.field(), std::move(c));
}

void squarefree_parts(const Poly& f, int mult, std::vector<std::pair<Poly, int>>& out) {
    // Yun-style decomposition in characteristic p
    if (f.degree() <= 0) return;
    Poly d = f.derivative();
    if (d.is_zero()) {
        squarefree_parts(pth_root(f), mult * static_cast<int>(f.p()), out);
        return;
    }
    Poly c = gcd(f, d);
    Poly w = f / c;
    int i = 1;
    while (w.degree() > 0) {
        Poly y = gcd(w, c);
        Poly z = w / y;
        if (z.degree() > 0) out.emplace_back(z.monic(), i * mult);
        w = y;
        c = c / y;
        ++i;
    }
    if (c.degree() > 0) squarefree_parts(pth_root(c.monic()), mult * static_cast<int>(f.p()), out);
}

void equal_degree_split(const Poly& f, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
    const int n = f.degree();
    if (n == d) {
        out.push_back(f.monic());
        return;
    }
    const PrimeModulus& F = f.field();
    std::uniform_int_distribution<Coeff> dist(0, F.p() - 1);
    while (true) {
        std::vector<Coeff> c(n);
        for (auto& x : c) x = dist(rng);
        Poly a(F, c);
        if (a.degree() < 1) continue;
        // a^{(p^d - 1)/2} = prod_i (a^{(p-1)/2})^{p^i}
        Poly b = powmod(a, (F.p() - 1) / 2, f);
        Poly acc = b;
        Poly cur = b;
        for (int i = 1; i < d; ++i) {
            cur = powmod(cur, F.p(), f);
            acc = mulmod(acc, cur, f);
        }
        Poly g = gcd(acc - Poly::constant(F, 1), f);
        if (g.degree() > 0 && g.degree() < n) {
            equal_degree_split(g, d, rng, out);
            equal_degree_split(f / g, d, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<std::pair<Poly, int>> factor(const Poly& a) {
    if (a.is_zero()) throw std::domain_error("factor of zero");
    std::vector<std::pair<Poly, int>> out;
    std::vector<std::pair<Poly, int>> parts;
    squarefree_parts(a.monic(), 1, parts);
    std::mt19937_64 rng(0x5eed);
    const Poly X = Poly::T(a.field());
    for (auto& [g0, m] : parts) {
        Poly g = g0;
        Poly h = X % g;
        for (int d = 1; g.degree() >= 2 * d; ++d) {
            h = powmod(h, g.p(), g);
            Poly s = gcd(h - X, g);
            if (s.degree() > 0) {
                std::vector<Poly> pieces;
                equal_degree_split(s, d, rng, pieces);
                for (auto& q : pieces) out.emplace_back(q, m);
                g = g / s;
                h = h % g;
            }
        }
        if (g.degree() > 0) out.emplace_back(g.monic(), m);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    // merge equal factors arising from different squarefree layers
    std::vector<std::pair<Poly, int>> merged;
    for (auto& e : out) {
        if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
        else merged.push_back(e);
    }
    return merged;
}

int valuation(const Poly& a, const Poly& P) {
    if (a.is_zero()) throw std::domain_error("valuation of zero");
    int v = 0;
    Poly x = a;
    while (true) {
        auto [q, r] = divmod(x, P);
        if (!r.is_zero()) return v;
        x = std::move(q);
        ++v;
    }
}

std::uint64_t poly_index(const Poly& a) {
    std::uint64_t idx = 0;
    for (int i = a.degree(); i >= 0; --i) idx = idx * a.p() + a.coeff(i);
    return idx;
}

std::uint64_t monic_index(const Poly& a) {
    if (!a.is_monic()) throw std::invalid_argument("monic_index: not monic");
    return poly_index(a.truncated(a.degree()));
}

Poly poly_from_index(const PrimeModulus& F, int n, std::uint64_t idx) {
    std::vector<Coeff> c(n);
    for (int i = 0; i < n; ++i) {
        c[i] = static_cast<Coeff>(idx % F.p());
        idx /= F.p();
    }
    return Poly(F, std::move(c));
}

Poly monic_from_index(const PrimeModulus& F, int d, std::uint64_t idx) {
    std::vector<Coeff> c(d + 1);
    for (int i = 0; i < d; ++i) {
        c[i] = static_cast<Coeff>(idx % F.p());
        idx /= F.p();
    }
    c[d] = 1;
    return Poly(F, std::move(c));
}

void for_each_monic(const PrimeModulus& F, int d, const std::function<void(const Poly&)>& fn) {
    if (d < 0) throw std::invalid_argument("negative degree");
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= F.p();
    for (std::uint64_t i = 0; i < count; ++i) fn(monic_from_index(F, d, i));
}

std::vector<Poly> enumerate_monic(const PrimeModulus& F, int d) {
    std::vector<Poly> out;
    for_each_monic(F, d, [&](const Poly& a) { out.push_back(a); });
    return out;
}

std::vector<Poly> monic_irreducibles(const PrimeModulus& F, int d) {
    std::vector<Poly> out;
    if (d < 1) return out;
    for_each_monic(F, d, [&](const Poly& a) {
        if (is_irreducible(a)) out.push_back(a);
    });
    return out;
}

Poly parse_poly(const PrimeModulus& F, std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw std::invalid_argument("empty polynomial text");
    std::vector<std::int64_t> acc;
    size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("malformed polynomial '" + std::string(text) + "': " + why);
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-') sign = -1;
            ++i;
        }
        if (i >= s.size()) fail("dangling sign");
        std::int64_t c = 1;
        bool have_c = false;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            c = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                c = c * 10 + (s[i] - '0');
                if (c > (std::int64_t{1} << 40)) fail("coefficient too large");
                ++i;
            }
            have_c = true;
        }
        int k = 0;
        if (i < s.size() && s[i] == '*') {
            if (!have_c) fail("expected coefficient before *");
            ++i;
            if (i >= s.size() || (s[i] != 'T' && s[i] != 't' && s[i] != 'x')) fail("expected T after *");
        }
        if (i < s.size() && (s[i] == 'T' || s[i] == 't' || s[i] == 'x')) {
            ++i;
            k = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected exponent");
                k = 0;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                    k = k * 10 + (s[i] - '0');
                    if (k > 100000) fail("exponent too large");
                    ++i;
                }
            }
        } else if (!have_c) {
            fail("unexpected character");
        }
        if (i < s.size() && s[i] != '+' && s[i] != '-') fail("unexpected character");
        if (static_cast<int>(acc.size()) <= k) acc.resize(k + 1, 0);
        acc[k] += sign * c;
    }
    std::vector<Coeff> c(acc.size());
    for (size_t j = 0; j < acc.size(); ++j) c[j] = F.reduce(acc[j]);
    return Poly(F, std::move(c));
}

// ---------------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = Poly::constant(num_.field(), 1);
        return;
    }
    Poly g = gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
    Coeff il = num_.field().inv(den_.lead());
    num_ = num_.scaled(il);
    den_ = den_.scaled(il);
}

int RationalFunction::degree() const {
    if (is_zero()) throw std::domain_error("degree of zero rational function");
    return num_.degree() - den_.degree();
}

Coeff RationalFunction::lead() const { return num_.lead(); }

std::pair<int, Poly> RationalFunction::split_at(const Poly& P) const {
    if (is_zero()) throw std::domain_error("valuation of zero");
    int vn = valuation(num_, P), vd = valuation(den_, P);
    Poly n = num_, d = den_;
    for (int i = 0; i < vn; ++i) n = n / P;
    for (int i = 0; i < vd; ++i) d = d / P;
    const auto [g, s, t] = xgcd(d % P, P);
    (void)t;
    if (g.degree() != 0) throw std::logic_error("split_at: denominator not a unit");
    return {vn - vd, mulmod(n, s, P)};
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return RationalFunction(den_, num_);
}

std::string RationalFunction::to_string() const {
    if (is_polynomial()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

LaurentPrefix laurent_at_infinity(const RationalFunction& f, int N) {
    if (f.is_zero()) throw std::domain_error("laurent expansion of zero");
    if (N < 1) throw std::invalid_argument("laurent precision must be >= 1");
    const PrimeModulus& F = f.field();
    const Poly& n = f.num();
    const Poly& d = f.den();
    LaurentPrefix out;
    out.valuation = d.degree() - n.degree();
    // series in u = 1/T: reversed numerator over reversed denominator
    auto rev = [](const Poly& a, int k) { return a.coeff(a.degree() - k); };
    const Coeff il = F.inv(d.lead());
    out.coeffs.assign(N, 0);
    for (int k = 0; k < N; ++k) {
        Coeff s = k <= n.degree() ? rev(n, k) : 0;
        for (int j = 1; j <= std::min(k, d.degree()); ++j) s = F.sub(s, F.mul(rev(d, j), out.coeffs[k - j]));
        out.coeffs[k] = F.mul(s, il);
    }
    return out;
}

Coeff additive_char_quotient(const Poly& num, const Poly& den) {
    if (num.degree() < den.degree() + 1) return 0;
    // only the top part of the numerator matters for the T^1 quotient coefficient
    return (num / den).coeff(1);
}

Coeff additive_char(const RationalFunction& f) {
    if (f.is_zero()) return 0;
    return additive_char_quotient(f.num(), f.den());
}

// ---------------------------------------------------------------- ResidueField

ResidueField::ResidueField(Poly P) : P_(std::move(P)) {
    if (!P_.is_monic() || P_.degree() < 1 || !is_irreducible(P_))
        throw std::invalid_argument("residue field needs a monic irreducible modulus");
    order_ = arqft::norm(P_);
}

Poly ResidueField::inv(const Poly& a) const {
    auto [g, s, t] = xgcd(a % P_, P_);
    (void)t;
    if (g.degree() != 0) throw std::domain_error("inverse of zero in residue field");
    return s % P_;
}

Coeff ResidueField::norm(const Poly& a) const {
    // product of the Galois conjugates a^{p^i}
    Poly x = a % P_;
    if (x.is_zero()) return 0;
    Poly acc = x, cur = x;
    for (int i = 1; i < degree(); ++i) {
        cur = powmod(cur, P_.p(), P_);
        acc = mulmod(acc, cur, P_);
    }
    if (acc.degree() > 0) throw std::logic_error("norm not in F_p");
    return acc.coeff(0);
}

int ResidueField::legendre(const Poly& a) const {
    // x^{(q-1)/2} = N(x)^{(p-1)/2}
    return base().chi(norm(a));
}

Coeff ResidueField::trace(const Poly& a) const {
    Poly x = a % P_;
    Poly acc = x, cur = x;
    for (int i = 1; i < degree(); ++i) {
        cur = powmod(cur, P_.p(), P_);
        acc += cur;
    }
    if (acc.degree() > 0) throw std::logic_error("trace not in F_p");
    return acc.coeff(0);
}

std::vector<Poly> ResidueField::elements() const {
    std::vector<Poly> out;
    out.reserve(order_);
    for (std::uint64_t i = 0; i < order_; ++i) out.push_back(poly_from_index(base(), degree(), i));
    return out;
}

}  // namespace arqft
