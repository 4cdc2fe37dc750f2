#include "arqft/spectral.hpp"
#include "arqft/symbols.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace arqft {

namespace {

using Rng = std::mt19937_64;

Poly rand_poly(const PrimeModulus& F, int max_deg, Rng& rng) {
    std::vector<Coeff> c(max_deg + 1);
    for (auto& x : c) x = static_cast<Coeff>(rng() % F.p());
    return Poly(F, c);
}

Poly rand_nonzero(const PrimeModulus& F, int max_deg, Rng& rng) {
    while (true) {
        Poly a = rand_poly(F, max_deg, rng);
        if (!a.is_zero()) return a;
    }
}

Mat2 elementary(const RationalFunction& x, int kind, const PrimeModulus& F) {
    RationalFunction one(Poly::constant(F, 1)), zero(F);
    if (kind == 0) return {one, x, zero, one};
    if (kind == 1) return {one, zero, x, one};
    return {x, zero, zero, x.inverse()};
}

Mat2 identity2(const PrimeModulus& F) {
    RationalFunction one(Poly::constant(F, 1));
    return {one, RationalFunction(F), RationalFunction(F), one};
}

Mat2 sl2_rational(const PrimeModulus& F, Rng& rng) {
    Mat2 g = identity2(F);
    const int steps = 1 + rng() % 3;
    for (int s = 0; s < steps; ++s) {
        RationalFunction x(rand_nonzero(F, 2, rng), rand_nonzero(F, 2, rng));
        g = mat2_mul(g, elementary(x, rng() % 3, F));
    }
    return g;
}

Mat2 sl2_poly(const PrimeModulus& F, int max_deg, Rng& rng) {
    while (true) {
        Mat2 g = identity2(F);
        const int steps = 1 + rng() % 4;
        for (int s = 0; s < steps; ++s) {
            const int kind = rng() % 3;
            Poly x = kind == 2 ? Poly::constant(F, 1 + rng() % (F.p() - 1)) : rand_poly(F, 1 + rng() % 2, rng);
            g = mat2_mul(g, elementary(RationalFunction(x), kind, F));
        }
        bool ok = true;
        for (auto* e : {&g.a, &g.b, &g.c, &g.d}) ok = ok && e->num().degree() <= max_deg;
        if (ok) return g;
    }
}

Mat2 sl2_oinf(const PrimeModulus& F, Rng& rng) {
    Mat2 g = identity2(F);
    const int steps = 1 + rng() % 4;
    for (int s = 0; s < steps; ++s) {
        const int kind = rng() % 3;
        Poly den = rand_nonzero(F, rng() % 3, rng);
        den = Poly::monomial(F, 1, den.degree()) + den.truncated(den.degree());
        RationalFunction x(F);
        if (kind == 2) {
            Poly num = Poly::monomial(F, 1 + rng() % (F.p() - 1), den.degree()) +
                       (den.degree() > 0 ? rand_poly(F, den.degree() - 1, rng) : Poly(F));
            x = RationalFunction(num, den);
        } else {
            x = RationalFunction(rand_poly(F, den.degree(), rng), den);
        }
        if (x.is_zero()) continue;
        g = mat2_mul(g, elementary(x, kind, F));
    }
    return g;
}

cplx rand_box(Rng& rng, double re_lo, double re_hi, double im_lo, double im_hi) {
    std::uniform_real_distribution<double> re(re_lo, re_hi), im(im_lo, im_hi);
    const double a = re(rng);
    return {a, im(rng)};
}

struct Acc {
    IdentityResult r;
    Acc(std::string name, std::string grid) {
        r.name = std::move(name);
        r.grid = std::move(grid);
    }
    void add(bool ok, double residual = 0) {
        ++r.cases;
        if (!ok) ++r.failures;
        if (std::isfinite(residual)) r.max_residual = std::max(r.max_residual, residual);
    }
};

}  // namespace

bool IdentityReport::pass() const {
    if (results.empty()) return false;
    for (const auto& r : results)
        if (!r.pass()) return false;
    return true;
}

IdentityReport run_identity_suite(std::uint64_t seed, bool include_symbols) {
    IdentityReport rep;
    rep.seed = seed;
    Rng rng(seed);
    const std::uint32_t primes[] = {5, 13};

    {
        Acc a("whittaker0_recursion", "1000 theta in [0,pi]x[-0.5,0.5]i, p in {5,13}, N=50, tol 1e-10");
        for (int t = 0; t < 1000; ++t) {
            const auto p = primes[t % 2];
            auto c = whittaker0_recursion_check(p, rand_box(rng, 0, std::numbers::pi, -0.5, 0.5), 50);
            a.add(c.ok, c.max_residual);
        }
        // tempered and degenerate points
        for (double th : {0.0, std::numbers::pi / 3, std::numbers::pi, 1e-9}) {
            auto c = whittaker0_recursion_check(5, th, 40);
            a.add(c.ok, c.max_residual);
        }
        rep.results.push_back(a.r);
    }
    {
        Acc a("whittaker0_symmetry", "200 theta in [0,pi]x[-0.5,0.5]i, n <= 50, p = 5, W(theta) = W(-theta)");
        for (int t = 0; t < 200; ++t) {
            const cplx th = rand_box(rng, 0, std::numbers::pi, -0.5, 0.5);
            double worst = 0;
            for (int n = 0; n <= 50; ++n) {
                const cplx x = whittaker0(5, n, th), y = whittaker0(5, n, -th);
                worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(x)));
            }
            a.add(worst < 1e-10, worst);
        }
        rep.results.push_back(a.r);
    }
    {
        Acc a("whittaker0_mellin", "200 (theta, s), theta in [0,pi]x[-0.3,0.3]i, Re s in [2,4], p in {5,13}, tol 1e-9");
        for (int t = 0; t < 200; ++t) {
            const auto p = primes[t % 2];
            const cplx th = rand_box(rng, 0, std::numbers::pi, -0.3, 0.3);
            const cplx s = rand_box(rng, 2, 4, -3, 3);
            auto m = whittaker_mellin_check(p, th, s, mellin_truncation(p, th, s));
            a.add(m.ok, m.residual);
        }
        rep.results.push_back(a.r);
    }
    {
        Acc a("metaplectic_recursion", "4 xi classes x 50 gamma in [0,pi]x[-0.5,0.5]i x p in {5,13}, both root signs, N=30, tol 1e-10");
        for (auto xi : {SquareClass::One, SquareClass::U, SquareClass::Pi, SquareClass::UPi})
            for (auto p : primes)
                for (int t = 0; t < 50; ++t) {
                    auto c = metaplectic_recursion_check(p, rand_box(rng, 0, std::numbers::pi, -0.5, 0.5), xi, 30);
                    a.add(c.ok, c.max_residual);
                }
        rep.results.push_back(a.r);
    }
    {
        Acc a("metaplectic_class_correction",
              "unit xi minus varpi-class xi equals the delta correction, 50 gamma, n <= 20, p = 5");
        const double sp = std::sqrt(5.0);
        for (int t = 0; t < 50; ++t) {
            const cplx g = rand_box(rng, 0.1, std::numbers::pi - 0.1, -0.3, 0.3);
            const cplx e = std::exp(cplx(0, 1) * g);
            double worst = 0;
            for (auto [u, w] : {std::pair{SquareClass::One, SquareClass::Pi}, std::pair{SquareClass::U, SquareClass::UPi}}) {
                const double chi = u == SquareClass::One ? 1 : -1;
                for (int n = 1; n <= 20; ++n) {
                    const cplx diff = metaplectic_whittaker0(5, n, g, u) - metaplectic_whittaker0(5, n, g, w);
                    // -(p/(e - 1/e)) chi/sqrt p [e^{-1}(e/p)^n - e (1/(e p))^n]
                    const cplx corr = -5.0 / (e - 1.0 / e) * chi / sp *
                                      (std::pow(e / 5.0, n) / e - e * std::pow(1.0 / (e * 5.0), n));
                    worst = std::max(worst, std::abs(diff - corr) / std::max(1.0, std::abs(corr)));
                }
            }
            a.add(worst < 1e-10, worst);
        }
        rep.results.push_back(a.r);
    }
    {
        Acc a("whittaker1_recursion", "100 lambda in [-1,1]x[-1,1]i, N=40, plus Mellin at Re s in [2,4], p in {5,13}");
        for (int t = 0; t < 100; ++t) {
            const cplx lam = rand_box(rng, -1, 1, -1, 1);
            auto c = whittaker1_recursion_check(lam, 40);
            a.add(c.ok, c.max_residual);
            auto m = whittaker1_mellin_check(primes[t % 2], lam, rand_box(rng, 2, 4, -3, 3));
            a.add(m.ok, m.residual);
        }
        rep.results.push_back(a.r);
    }
    {
        Acc a("depth1_constraint", "p in {5,13}, valuations <= 8, both root signs, both leading classes; only +-sqrt p");
        for (auto p : primes) {
            auto d = depth1_constraint_check(p);
            double worst = 0;
            for (auto w : d.eigenvalues) worst = std::max(worst, std::abs(w * w - static_cast<double>(p)));
            a.add(d.ok, worst);
        }
        rep.results.push_back(a.r);
    }
    {
        const auto& F = PrimeModulus::get(5);
        Acc a("metaplectic_hecke_linearity", "30 random family pairs over F_5, P in {T, T+1, T^2+2}");
        const Poly Ps[] = {Poly::from_ints(F, {0, 1}), Poly::from_ints(F, {1, 1}), Poly::from_ints(F, {2, 0, 1})};
        for (int t = 0; t < 30; ++t) {
            CoeffFamily f, g;
            for (int k = 0; k < 12; ++k) {
                f[{rand_nonzero(F, 4, rng), 2 * static_cast<int>(rng() % 5)}] = rand_box(rng, -1, 1, -1, 1);
                g[{rand_nonzero(F, 4, rng), 2 * static_cast<int>(rng() % 5)}] = rand_box(rng, -1, 1, -1, 1);
            }
            const cplx alpha = rand_box(rng, -2, 2, -2, 2);
            CoeffFamily h = f;
            for (auto& [k, v] : h) v *= alpha;
            for (const auto& [k, v] : g) h[k] += v;
            const Poly& P = Ps[t % 3];
            auto Tf = apply_metaplectic_hecke(f, P), Tg = apply_metaplectic_hecke(g, P), Th = apply_metaplectic_hecke(h, P);
            CoeffFamily want = Tf;
            for (auto& [k, v] : want) v *= alpha;
            for (const auto& [k, v] : Tg) want[k] += v;
            double worst = 0;
            for (const auto& [k, v] : want) {
                auto it = Th.find(k);
                worst = std::max(worst, std::abs((it == Th.end() ? cplx(0) : it->second) - v));
            }
            for (const auto& [k, v] : Th)
                if (!want.count(k)) worst = std::max(worst, std::abs(v));
            a.add(worst < 1e-9, worst);
        }
        rep.results.push_back(a.r);
    }
    {
        const auto& F = PrimeModulus::get(5);
        Acc a("unary_theta_eigen", "P = T+1 over F_5, l of degree <= 3, valuations <= 10; eigenvalue recorded");
        auto e = unary_theta_eigen_check(Poly::from_ints(F, {1, 1}));
        rep.unary_theta_eigenvalue = e.eigenvalue;
        a.add(e.is_eigen, e.max_residual);
        rep.results.push_back(a.r);
    }
    {
        const auto& F = PrimeModulus::get(5);
        Acc a("integral_hecke_multiplicativity", "constant and random lambda_P tables over F_5, degree <= 5, all coprime (a, P)");
        std::map<Poly, cplx> lp;
        auto random_lp = [&](const Poly& P) {
            auto it = lp.find(P);
            if (it == lp.end()) it = lp.emplace(P, rand_box(rng, -2, 2, -1, 1)).first;
            return it->second;
        };
        const double p = F.p();
        auto tables = {hecke_table_from_recursion(F, 5, [&](const Poly& P) { return cplx(1 + std::pow(p, -P.degree())); }),
                       hecke_table_from_recursion(F, 5, random_lp)};
        for (const auto& tab : tables)
            for (int dp = 1; dp <= 2; ++dp)
                for (const auto& P : monic_irreducibles(F, dp))
                    for (const auto& [x, v] : tab.lambda) {
                        if (x.degree() + dp > 5) continue;
                        a.add(integral_hecke_relation_check(tab, P, x));
                        if (gcd(x, P).is_one()) a.add(integral_hecke_multiplicativity_check(tab, P, x));
                    }
        rep.results.push_back(a.r);
    }
    {
        Acc a("cocycle_identity", "1000 triples in SL2(F_p(T)), p in {5,13}");
        for (int t = 0; t < 1000; ++t) {
            const auto& F = PrimeModulus::get(primes[t % 2]);
            const Mat2 g1 = sl2_rational(F, rng), g2 = sl2_rational(F, rng), g3 = sl2_rational(F, rng);
            a.add(cocycle_eps(g1, g2) * cocycle_eps(mat2_mul(g1, g2), g3) ==
                  cocycle_eps(g1, mat2_mul(g2, g3)) * cocycle_eps(g2, g3));
        }
        rep.results.push_back(a.r);
    }
    {
        Acc a("eta_homomorphism", "500 pairs in SL2(F_p[T]), entries of degree <= 3, p in {5,13}");
        for (int t = 0; t < 500; ++t) {
            const auto& F = PrimeModulus::get(primes[t % 2]);
            const Mat2 g1 = sl2_poly(F, 3, rng), g2 = sl2_poly(F, 3, rng);
            a.add(to_int(eta_split(mat2_mul(g1, g2))) ==
                  to_int(eta_split(g1)) * to_int(eta_split(g2)) * to_int(cocycle_eps(g1, g2)));
        }
        rep.results.push_back(a.r);
    }
    {
        Acc a("iota_homomorphism", "500 pairs in SL2(O_infty), p in {5,13}");
        for (int t = 0; t < 500; ++t) {
            const auto& F = PrimeModulus::get(primes[t % 2]);
            const Mat2 g1 = sl2_oinf(F, rng), g2 = sl2_oinf(F, rng);
            a.add(to_int(kappa_split(mat2_mul(g1, g2))) ==
                  to_int(kappa_split(g1)) * to_int(kappa_split(g2)) * to_int(cocycle_eps(g1, g2)));
        }
        rep.results.push_back(a.r);
    }
    if (include_symbols) {
        {
            Acc a("quadratic_reciprocity", "1000 coprime pairs, degree <= 6, p in {5,13}");
            while (a.r.cases < 1000) {
                const auto& F = PrimeModulus::get(primes[a.r.cases % 2]);
                const Poly x = rand_nonzero(F, 6, rng).monic(), y = rand_nonzero(F, 6, rng).monic();
                if (!gcd(x, y).is_one()) continue;
                a.add(verify_reciprocity(x, y));
            }
            rep.results.push_back(a.r);
        }
        {
            Acc a("product_formula", "300 pairs of nonzero rational functions, degree <= 3, p in {5,13}");
            for (int t = 0; t < 300; ++t) {
                const auto& F = PrimeModulus::get(primes[t % 2]);
                RationalFunction x(rand_nonzero(F, 3, rng), rand_nonzero(F, 2, rng));
                RationalFunction y(rand_nonzero(F, 3, rng), rand_nonzero(F, 2, rng));
                a.add(verify_product_formula(x, y));
            }
            rep.results.push_back(a.r);
        }
        {
            const auto& F = PrimeModulus::get(5);
            Acc a("gauss_sum_magnitude", "all square-free monic D of degree <= 3 over F_5, |G_1(D)|^2 = |D|");
            for (int d = 1; d <= 3; ++d)
                for (const auto& D : enumerate_monic(F, d)) {
                    if (!is_squarefree(D)) continue;
                    const double r = std::abs(std::norm(gauss_sum_rational(Poly::constant(F, 1), D).value) -
                                              static_cast<double>(norm(D)));
                    a.add(r < 1e-8, r);
                }
            rep.results.push_back(a.r);
        }
        {
            Acc a("hasse_davenport", "s in {2,3} over F_5 and F_13");
            for (auto p : primes)
                for (int s : {2, 3}) a.add(hasse_davenport_check(PrimeModulus::get(p), s));
            rep.results.push_back(a.r);
        }
    }
    return rep;
}

}  // namespace arqft
