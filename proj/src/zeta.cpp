#include "arqft/zeta.hpp"

#include "arqft/errors.hpp"
#include "arqft/parallel.hpp"
#include "arqft/symbols.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace arqft {

QuadraticDiscriminant QuadraticDiscriminant::make(Poly D) {
    if (D.degree() < 1) throw PreconditionError("discriminant must have degree >= 1");
    if (!is_squarefree(D)) throw PreconditionError("discriminant must be square-free: " + D.to_string());
    QuadraticDiscriminant q{D};
    q.unit = D.lead();
    q.degree = D.degree();
    q.even_degree = q.degree % 2 == 0;
    q.genus = q.degree / 2;
    q.curve_genus = (q.degree - 1) / 2;
    return q;
}

long long char_sum_direct(const Poly& D, int n) {
    long long s = 0;
    for_each_monic(D.field(), n, [&](const Poly& a) { s += to_int(jacobi(D, a)); });
    return s;
}

namespace {

using CoeffList = std::vector<Coeff>;

const std::vector<CoeffList>& irreducibles_of_degree(const PrimeModulus& F, int d) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, int>, std::vector<CoeffList>> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(F.p(), d);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<CoeffList> out;
    for (const auto& P : monic_irreducibles(F, d)) out.push_back(P.coeffs());
    return memo.emplace(key, std::move(out)).first->second;
}

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

long long char_sum_tail(const QuadraticDiscriminant& D, const LPolynomial& L, int n) {
    const int N = D.degree;
    if (n < N) throw std::invalid_argument("char_sum_tail needs n >= deg D");
    if (!D.even_degree) return 0;
    const PrimeModulus& F = D.D.field();
    const int cu = F.chi(D.unit);
    // monic a of degree n >= N meet every class mod D/u exactly p^{n-N} times
    long long s = 0;
    for (int m = 0; m < N; ++m) s += (m % 2 ? cu : 1) * L[m];
    return (n % 2 ? cu : 1) * ipow(F.p(), n - N) * static_cast<long long>(F.p() - 1) * s;
}

LPolynomial l_polynomial(const QuadraticDiscriminant& D) {
    const PrimeModulus& F = D.D.field();
    const int N = D.degree;
    std::vector<long long> a(N, 0);
    a[0] = 1;
    const auto& dc = D.D.coeffs();
    for (int d = 1; d < N; ++d)
        for (const auto& P : irreducibles_of_degree(F, d)) {
            const int chi = jacobi_coeffs(dc.data(), N, P.data(), d, F);
            if (!chi) continue;
            // times 1/(1 - chi t^d)
            for (int n = d; n < N; ++n) a[n] += chi * a[n - d];
        }
    LPolynomial L{F.p(), std::move(a)};
    while (L.coeffs.size() > 1 && L.coeffs.back() == 0) L.coeffs.pop_back();
    if (char_sum_tail(D, L, N) != 0) throw CheckFailure("character sum of degree deg D does not vanish for " + D.D.to_string());
    return L;
}

long long char_sum(const QuadraticDiscriminant& D, int n) {
    if (n < 0) throw std::invalid_argument("char_sum needs n >= 0");
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, CoeffList>, LPolynomial> memo;
    LPolynomial L;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find({D.D.p(), D.D.coeffs()});
        if (it != memo.end()) L = it->second;
    }
    if (L.p == 0) {
        L = l_polynomial(D);
        std::lock_guard<std::mutex> lock(mu);
        memo.emplace(std::make_pair(D.D.p(), D.D.coeffs()), L);
    }
    if (n < D.degree) return L[n];
    return char_sum_tail(D, L, n);
}

PurePart pure_part(const LPolynomial& L) {
    PurePart out{L};
    auto& c = out.weil.coeffs;
    auto strip = [&](int sign) {
        // divide by (1 - sign t) while t = sign is a root
        while (c.size() > 1) {
            long long v = 0, pw = 1;
            for (long long x : c) {
                v += x * pw;
                pw *= sign;
            }
            if (v != 0) return;
            std::vector<long long> q(c.size() - 1);
            long long prev = 0;
            for (size_t i = 0; i + 1 < c.size(); ++i) {
                q[i] = c[i] + sign * prev;
                prev = q[i];
            }
            c = std::move(q);
            (sign > 0 ? out.stripped_plus : out.stripped_minus)++;
        }
    };
    strip(1);
    strip(-1);
    return out;
}

FunctionalEquation functional_equation_check(const LPolynomial& pure) {
    const int n = pure.degree();
    if (n % 2) throw PreconditionError("functional equation needs an even-degree pure part");
    const int g = n / 2;
    FunctionalEquation fe;
    if (g == 0) {
        fe.holds = pure[0] == 1;
        fe.sign = 1;
        return fe;
    }
    const long long pg = ipow(pure.p, g);
    if (pure[n] == pg) fe.sign = 1;
    else if (pure[n] == -pg) fe.sign = -1;
    else return fe;
    fe.holds = true;
    for (int i = 0; i <= g; ++i)
        if (pure[n - i] != fe.sign * ipow(pure.p, g - i) * pure[i]) fe.holds = false;
    return fe;
}

namespace {

using RPoly = std::vector<Rational>;

void rtrim(RPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

RPoly rderiv(const RPoly& a) {
    RPoly d;
    for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long long>(i));
    rtrim(d);
    return d;
}

std::pair<RPoly, RPoly> rdivmod(RPoly a, const RPoly& b) {
    RPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = f;
        for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
        a.pop_back();
        rtrim(a);
    }
    rtrim(q);
    return {q, a};
}

RPoly rmonic(RPoly a) {
    Rational l = a.back();
    for (auto& x : a) x /= l;
    return a;
}

RPoly rgcd(RPoly a, RPoly b) {
    rtrim(a);
    rtrim(b);
    while (!b.empty()) {
        RPoly r = rdivmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return rmonic(a);
}

RPoly rsub(RPoly a, const RPoly& b) {
    if (b.size() > a.size()) a.resize(b.size(), Rational(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    rtrim(a);
    return a;
}

// Yun: f = prod a_i^i
std::vector<std::pair<RPoly, int>> squarefree_decomposition(const RPoly& f) {
    std::vector<std::pair<RPoly, int>> out;
    RPoly fp = rderiv(f);
    RPoly a0 = rgcd(f, fp);
    RPoly b = rdivmod(f, a0).first;
    RPoly c = rdivmod(fp, a0).first;
    RPoly d = rsub(c, rderiv(b));
    for (int i = 1; b.size() > 1; ++i) {
        RPoly a = d.empty() ? rmonic(b) : rgcd(b, d);
        if (a.size() > 1) out.emplace_back(a, i);
        b = rdivmod(b, a).first;
        c = rdivmod(d, a).first;
        d = rsub(c, rderiv(b));
    }
    return out;
}

template <class T>
std::complex<T> horner(const std::vector<T>& c, std::complex<T> x) {
    std::complex<T> r = 0;
    for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

std::vector<std::complex<double>> roots_squarefree(const RPoly& f) {
    const int n = static_cast<int>(f.size()) - 1;
    std::vector<long double> cl(f.size());
    for (size_t i = 0; i < f.size(); ++i) cl[i] = f[i].convert_to<long double>();
    std::vector<long double> dl(n);
    for (int i = 1; i <= n; ++i) dl[i - 1] = cl[i] * i;
    std::vector<std::complex<double>> out;
    if (n == 1) {
        out.emplace_back(static_cast<double>(-cl[0] / cl[1]), 0.0);
        return out;
    }
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = static_cast<double>(-cl[i] / cl[n]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    if (es.info() != Eigen::Success) throw CheckFailure("companion eigenvalue solver did not converge");
    for (int i = 0; i < n; ++i) {
        std::complex<long double> z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
        for (int it = 0; it < 50; ++it) {
            auto fv = horner(cl, z), dv = horner(dl, z);
            if (std::abs(dv) == 0) break;
            auto step = fv / dv;
            z -= step;
            if (std::abs(step) < 1e-19L * std::max<long double>(1, std::abs(z))) break;
        }
        long double scale = 0;
        for (size_t k = 0; k < cl.size(); ++k) scale += std::abs(cl[k]) * std::pow(std::abs(z), static_cast<long double>(k));
        if (std::abs(horner(cl, z)) > 1e-12L * scale) throw CheckFailure("root polishing did not converge");
        out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    return out;
}

}  // namespace

ZeroSet zeros(const LPolynomial& pure, double tol) {
    ZeroSet Z;
    if (pure.degree() <= 0) return Z;
    RPoly f;
    for (long long c : pure.coeffs) f.push_back(Rational(c));
    for (const auto& [a, k] : squarefree_decomposition(f))
        for (const auto& r : roots_squarefree(a))
            for (int i = 0; i < k; ++i) Z.roots.push_back(r);
    if (static_cast<int>(Z.roots.size()) != pure.degree()) throw CheckFailure("root count mismatch");
    std::sort(Z.roots.begin(), Z.roots.end(), [](auto x, auto y) { return std::arg(x) < std::arg(y); });
    for (const auto& r : Z.roots) Z.angles.push_back(std::arg(r));
    (void)tol;
    return Z;
}

bool rh_check(const ZeroSet& Z, std::uint32_t p, double tol) {
    const double target = 1.0 / std::sqrt(static_cast<double>(p));
    for (const auto& r : Z.roots)
        if (std::abs(std::abs(r) - target) > tol) return false;
    return true;
}

bool zero_closure_check(const ZeroSet& Z, std::uint32_t p, double tol) {
    const double s = std::sqrt(static_cast<double>(p));
    auto matches = [&](auto transform) {
        std::vector<bool> used(Z.roots.size(), false);
        for (const auto& r : Z.roots) {
            auto want = transform(r * s);
            bool found = false;
            for (size_t j = 0; j < Z.roots.size() && !found; ++j)
                if (!used[j] && std::abs(Z.roots[j] * s - want) <= tol * 10) used[j] = found = true;
            if (!found) return false;
        }
        return true;
    };
    return matches([](std::complex<double> z) { return std::conj(z); }) &&
           matches([](std::complex<double> z) { return std::conj(1.0 / std::conj(z)); });
}

EdgeValues central_edge_values(const LPolynomial& L) {
    EdgeValues v;
    const double t = 1.0 / std::sqrt(static_cast<double>(L.p));
    double acc = 0;
    for (int i = L.degree(); i >= 0; --i) acc = acc * t + static_cast<double>(L[i]);
    v.central = acc;
    Rational e(0), pw(1);
    for (int i = 0; i <= L.degree(); ++i) {
        e += Rational(L[i]) * pw;
        pw /= static_cast<long long>(L.p);
    }
    v.edge_exact = e;
    v.edge = to_double(e);
    return v;
}

double central_bound(int g, std::uint32_t p) {
    if (g < 2) throw std::invalid_argument("central bound needs g >= 2");
    const double logp_g = std::log(static_cast<double>(g)) / std::log(static_cast<double>(p));
    return std::exp(2.0 * g / logp_g + 4.0 * std::sqrt(static_cast<double>(p) * g));
}

BoundReport bound_checks(const QuadraticDiscriminant& D, const LPolynomial& L) {
    BoundReport b;
    b.g = D.genus;
    auto v = central_edge_values(L);
    b.central = v.central;
    b.edge = v.edge;
    b.applies = b.g >= 2;
    b.window_low = b.window_high = std::nan("");
    if (b.applies) {
        b.bound = central_bound(b.g, L.p);
        b.holds = std::abs(b.central) <= b.bound;
        const double l = std::log(static_cast<double>(b.g)) / std::log(static_cast<double>(L.p));
        b.window_low = b.edge * l * l * l;
        b.window_high = b.edge / (l * l * l);
    }
    return b;
}

std::complex<double> power_sum(const ZeroSet& Z, int r) {
    if (r < 1) throw std::invalid_argument("power_sum needs r >= 1");
    std::complex<double> s = 0;
    for (double th : Z.angles) s += std::polar(1.0, -r * th);
    return s;
}

double star_discrepancy(std::vector<double> u) {
    if (u.empty()) return 0;
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0;
    for (size_t i = 0; i < u.size(); ++i) d = std::max({d, (i + 1) / n - u[i], u[i] - i / n});
    return std::clamp(d, 0.0, 1.0);
}

double max_on_circle(const LPolynomial& L) {
    const double rho = 1.0 / std::sqrt(static_cast<double>(L.p));
    std::vector<double> c(L.coeffs.begin(), L.coeffs.end());
    auto mag = [&](double phi) { return std::abs(horner(c, std::polar(rho, phi))); };
    constexpr int kSamples = 4096;
    const double h = 2 * std::numbers::pi / kSamples;
    int best = 0;
    double best_v = -1;
    for (int k = 0; k < kSamples; ++k) {
        double v = mag(k * h);
        if (v > best_v) best_v = v, best = k;
    }
    // golden section on the bracketing cells
    double a = (best - 1) * h, b = (best + 1) * h;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = mag(x1), f2 = mag(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 > f2) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - gr * (b - a), f1 = mag(x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + gr * (b - a), f2 = mag(x2);
        }
    }
    return std::max({best_v, f1, f2});
}

std::vector<Poly> squarefree_monic(const PrimeModulus& F, int d) {
    std::vector<Poly> out;
    for_each_monic(F, d, [&](const Poly& a) {
        if (is_squarefree(a)) out.push_back(a);
    });
    return out;
}

std::vector<Poly> sample_squarefree_monic(const PrimeModulus& F, int d, std::size_t n, std::uint64_t seed) {
    std::uint64_t total = norm(Poly::monomial(F, 1, d));
    std::mt19937_64 rng(seed);
    std::set<std::uint64_t> chosen;
    std::size_t tries = 0;
    while (chosen.size() < n) {
        if (++tries > 100 * n + 1000) throw PreconditionError("sample larger than the family");
        std::uint64_t idx = rng() % total;
        if (chosen.count(idx)) continue;
        if (is_squarefree(monic_from_index(F, d, idx))) chosen.insert(idx);
    }
    std::vector<Poly> out;
    for (auto idx : chosen) out.push_back(monic_from_index(F, d, idx));
    return out;
}

FamilyRow analyze(const Poly& D, const LPolynomial& L, double tol, bool with_max) {
    FamilyRow r{D, L};
    auto q = QuadraticDiscriminant::make(D);
    r.pure = pure_part(L);
    r.fe = functional_equation_check(r.pure.weil);
    r.zs = zeros(r.pure.weil, tol);
    r.rh = rh_check(r.zs, L.p, tol);
    r.closure = zero_closure_check(r.zs, L.p, tol);
    r.values = central_edge_values(L);
    r.bound = bound_checks(q, L);
    if (with_max) r.max_circle = max_on_circle(L);
    std::vector<double> u;
    for (double th : r.zs.angles) u.push_back(th / (2 * std::numbers::pi) - std::floor(th / (2 * std::numbers::pi)));
    r.discrepancy = star_discrepancy(u);
    return r;
}

std::vector<LPolynomial> family_l_polynomials(const std::vector<Poly>& Ds, unsigned workers, const DiskCache& cache) {
    std::string members;
    for (const auto& D : Ds) members += D.to_string() + "\n";
    const std::uint32_t p = Ds.empty() ? 0 : Ds.front().p();
    const std::string key = "lpoly-family p=" + std::to_string(p) + " n=" + std::to_string(Ds.size()) +
                            " members=" + DiskCache::digest(members);
    std::vector<LPolynomial> out(Ds.size());
    if (auto hit = cache.get(key)) {
        std::istringstream in(*hit);
        std::string line;
        size_t i = 0;
        bool ok = true;
        while (i < Ds.size() && std::getline(in, line)) {
            std::istringstream ls(line);
            out[i].p = p;
            out[i].coeffs.clear();
            long long x;
            while (ls >> x) out[i].coeffs.push_back(x);
            if (out[i].coeffs.empty()) ok = false;
            ++i;
        }
        if (ok && i == Ds.size()) return out;
    }
    parallel_for(Ds.size(), workers, [&](std::size_t i) { out[i] = l_polynomial(QuadraticDiscriminant::make(Ds[i])); });
    std::string payload;
    for (const auto& L : out) {
        for (size_t j = 0; j < L.coeffs.size(); ++j) payload += (j ? " " : "") + std::to_string(L.coeffs[j]);
        payload += "\n";
    }
    cache.put(key, payload);
    return out;
}

std::vector<FamilyRow> family_rows(const PrimeModulus& F, int d, const FamilyOptions& opt, const DiskCache& cache) {
    std::vector<Poly> Ds = opt.sample ? sample_squarefree_monic(F, d, opt.sample, opt.seed) : squarefree_monic(F, d);
    auto Ls = family_l_polynomials(Ds, opt.workers, cache);
    std::vector<FamilyRow> rows(Ds.size(), FamilyRow{Poly(F)});
    parallel_for(Ds.size(), opt.workers, [&](std::size_t i) { rows[i] = analyze(Ds[i], Ls[i], opt.tol, opt.with_max); });
    return rows;
}

double family_discrepancy(const std::vector<FamilyRow>& rows) {
    std::vector<double> u;
    for (const auto& r : rows)
        for (double th : r.zs.angles) u.push_back(th / (2 * std::numbers::pi) - std::floor(th / (2 * std::numbers::pi)));
    return star_discrepancy(std::move(u));
}

FamilyStats family_stats(int degree, const std::vector<FamilyRow>& rows) {
    FamilyStats s;
    s.degree = degree;
    s.sample_size = rows.size();
    s.min_central = rows.empty() ? 0 : rows.front().values.central;
    s.max_central = s.min_central;
    for (const auto& r : rows) {
        s.angle_count += r.zs.angles.size();
        s.max_M = std::max(s.max_M, r.max_circle);
        s.min_central = std::min(s.min_central, r.values.central);
        s.max_central = std::max(s.max_central, r.values.central);
        s.rh_failures += !r.rh;
        s.fe_failures += !r.fe.holds;
        if (r.bound.applies) {
            ++s.bound_checked;
            s.bound_violations += !r.bound.holds;
        }
    }
    s.discrepancy = family_discrepancy(rows);
    return s;
}

std::string csv_header() {
    return "D,deg,coeffs,eps,stripped_plus,stripped_minus,angles,L_half,L_one_num,L_one_den,M,discrepancy";
}

std::string csv_row(const FamilyRow& r) {
    auto num = [](double x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return std::string(buf);
    };
    std::string s = r.D.to_string() + "," + std::to_string(r.D.degree()) + ",";
    for (size_t i = 0; i < r.L.coeffs.size(); ++i) s += (i ? ";" : "") + std::to_string(r.L.coeffs[i]);
    s += "," + std::to_string(r.fe.sign) + "," + std::to_string(r.pure.stripped_plus) + "," +
         std::to_string(r.pure.stripped_minus) + ",";
    for (size_t i = 0; i < r.zs.angles.size(); ++i) s += (i ? ";" : "") + num(r.zs.angles[i]);
    s += "," + num(r.values.central) + "," + numerator(r.values.edge_exact).str() + "," +
         denominator(r.values.edge_exact).str() + "," + num(r.max_circle) + "," + num(r.discrepancy);
    return s;
}

}  // namespace arqft
