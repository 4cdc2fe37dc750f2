#include <doctest.h>

#include "arqft/errors.hpp"
#include "arqft/spectral.hpp"
#include "arqft/symbols.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace arqft;

namespace {

const PrimeModulus& F5() { return PrimeModulus::get(5); }
Poly P(std::initializer_list<std::int64_t> c) { return Poly::from_ints(F5(), c); }

// c(0) = c(1) = 0, c(2) = 1, then c(n+1) = lambda c(n) - c(n-1)/p
std::vector<cplx> iterate_depth0(std::uint32_t p, cplx theta, int N) {
    const cplx e = std::exp(cplx(0, 1) * theta);
    const cplx lam = (e + 1.0 / e) / std::sqrt(double(p));
    std::vector<cplx> c(N + 2, 0);
    c[2] = 1;
    for (int n = 2; n + 1 <= N + 1; ++n) c[n + 1] = lam * c[n] - c[n - 1] / double(p);
    return c;
}

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("whittaker0 examples") {
    const cplx th = std::numbers::pi / 3;
    CHECK(whittaker0(5, 1, th) == cplx(0));
    CHECK(whittaker0(5, 0, th) == cplx(0));
    CHECK(whittaker0(5, -3, th) == cplx(0));
    CHECK(close(whittaker0(5, 2, th), 1.0, 1e-14));
    CHECK(close(whittaker0(5, 3, th), spectral_eigenvalue(5, th), 1e-14));
    // lambda at pi/3 is 1/sqrt 5
    CHECK(close(spectral_eigenvalue(5, th), 1 / std::sqrt(5.0), 1e-14));
}

TEST_CASE("whittaker0 closed form matches the iterated recursion") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> re(0, std::numbers::pi), im(-0.5, 0.5);
    for (auto p : {5u, 13u})
        for (int t = 0; t < 50; ++t) {
            const cplx th(re(rng), im(rng));
            const auto c = iterate_depth0(p, th, 40);
            for (int n = 0; n <= 40; ++n) REQUIRE(close(whittaker0(p, n, th), c[n], 1e-9));
        }
    // degenerate branch e^{i theta} = +-1: limit (n-1)(+-1)^{n-2} p^{-(n-2)/2}
    for (double th : {0.0, std::numbers::pi}) {
        const auto c = iterate_depth0(5, th, 20);
        for (int n = 2; n <= 20; ++n) {
            const double lim = (n - 1) * std::pow(th == 0.0 ? 1.0 : -1.0, n - 2) * std::pow(5.0, -(n - 2) / 2.0);
            CHECK(close(whittaker0(5, n, th), lim, 1e-12));
            CHECK(close(c[n], lim, 1e-12));
        }
    }
    // just off the degenerate point the two branches agree
    CHECK(close(whittaker0(5, 12, 1e-5), whittaker0(5, 12, 0.0), 1e-8));
}

TEST_CASE("whittaker0 recursion check") {
    CHECK(whittaker0_recursion_check(5, std::numbers::pi / 3, 40).ok);
    CHECK(whittaker0_recursion_check(5, cplx(0, 0.1), 20).ok);
    CHECK(whittaker0_recursion_check(13, 0.0, 30).ok);
    // negative control
    std::vector<cplx> c(22);
    const cplx th = std::numbers::pi / 3;
    for (int n = 0; n < 22; ++n) c[n] = whittaker0(5, n, th);
    CHECK(whittaker0_table_check(5, spectral_eigenvalue(5, th), c).ok);
    c[5] += 1e-6;
    CHECK_FALSE(whittaker0_table_check(5, spectral_eigenvalue(5, th), c).ok);
    CHECK_THROWS_AS(whittaker0_recursion_check(5, th, 2), PreconditionError);
}

TEST_CASE("whittaker0 recursion over a random complex box") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> re(0, std::numbers::pi), im(-0.5, 0.5);
    for (int t = 0; t < 1000; ++t) {
        const cplx th(re(rng), im(rng));
        REQUIRE(whittaker0_recursion_check(t % 2 ? 13 : 5, th, 50).ok);
        for (int n = 0; n <= 50; n += 7) REQUIRE(close(whittaker0(5, n, th), whittaker0(5, n, -th), 1e-10));
    }
}

TEST_CASE("mellin identity") {
    auto m = whittaker_mellin_check(5, 1.0, 2.0, mellin_truncation(5, 1.0, 2.0));
    CHECK(m.ok);
    CHECK(m.residual < 1e-9);
    CHECK(m.tail_bound < 1e-12);
    // oracle: iterated coefficients summed against p^{-ns}
    const auto c = iterate_depth0(5, 1.0, 60);
    cplx direct = 0;
    for (int n = 2; n <= 60; ++n) direct += c[n] * std::pow(5.0, -2.0 * n);
    CHECK(close(m.lhs, direct, 1e-12));
    // symmetric in theta
    auto mm = whittaker_mellin_check(5, -1.0, 2.0, m.N);
    CHECK(std::abs(mm.lhs - m.lhs) < 1e-15);
    CHECK(std::abs(mm.rhs - m.rhs) < 1e-15);
    // large s: p^{2s} times either side tends to 1
    auto big = whittaker_mellin_check(5, 1.0, 12.0, mellin_truncation(5, 1.0, 12.0));
    CHECK(std::abs(big.lhs * std::pow(5.0, 24.0) - 1.0) < 1e-7);
    CHECK(std::abs(big.rhs * std::pow(5.0, 24.0) - 1.0) < 1e-7);
    // divergent and too-short truncations are rejected
    CHECK_THROWS_AS(whittaker_mellin_check(5, cplx(0, 3), -1.0, 40), PreconditionError);
    CHECK_THROWS_AS(whittaker_mellin_check(5, 1.0, 2.0, 3), PreconditionError);
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> th(0, 3), sr(2, 4), si(-3, 3);
    for (auto p : {5u, 13u})
        for (int t = 0; t < 100; ++t) {
            const cplx theta(th(rng), 0.2 * si(rng) / 3), s(sr(rng), si(rng));
            REQUIRE(whittaker_mellin_check(p, theta, s, mellin_truncation(p, theta, s)).residual < 1e-9);
        }
}

TEST_CASE("metaplectic whittaker closed form") {
    const cplx g = 0.7;
    for (auto xi : {SquareClass::One, SquareClass::U, SquareClass::Pi, SquareClass::UPi}) {
        CHECK(metaplectic_whittaker0(5, 0, g, xi) == cplx(0));
        CHECK(metaplectic_whittaker0(5, -2, g, xi) == cplx(0));
        // first value is the root sign
        CHECK(close(metaplectic_whittaker0(5, 1, g, xi, 1), 1.0, 1e-13));
        CHECK(close(metaplectic_whittaker0(5, 1, g, xi, -1), -1.0, 1e-13));
        CHECK(metaplectic_recursion_check(5, g, xi, 30).ok);
        CHECK(metaplectic_recursion_check(13, cplx(0.3, 0.2), xi, 30).ok);
    }
    // the two varpi classes agree, the unit classes differ by the sign of the correction
    for (int n = 1; n <= 10; ++n) {
        CHECK(close(metaplectic_whittaker0(5, n, g, SquareClass::Pi), metaplectic_whittaker0(5, n, g, SquareClass::UPi), 1e-14));
        const cplx base = metaplectic_whittaker0(5, n, g, SquareClass::Pi);
        const cplx d1 = metaplectic_whittaker0(5, n, g, SquareClass::One) - base;
        const cplx d2 = metaplectic_whittaker0(5, n, g, SquareClass::U) - base;
        CHECK(std::abs(d1 + d2) < 1e-14);
    }
    // sign pattern sigma^n
    for (int n = 1; n <= 8; ++n)
        CHECK(close(metaplectic_whittaker0(5, n, g, SquareClass::One, -1),
                    (n % 2 ? -1.0 : 1.0) * metaplectic_whittaker0(5, n, g, SquareClass::One, 1), 1e-14));
}

TEST_CASE("metaplectic closed form matches the iterated relation") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> re(0.05, 3.0), im(-0.4, 0.4);
    for (auto xi : {SquareClass::One, SquareClass::U, SquareClass::Pi, SquareClass::UPi})
        for (int t = 0; t < 40; ++t) {
            const cplx g(re(rng), im(rng));
            const double p = 5, sp = std::sqrt(p);
            const cplx e = std::exp(cplx(0, 1) * g), lam = p * (e + 1.0 / e);
            const bool unit = xi == SquareClass::One || xi == SquareClass::U;
            const double chi = xi == SquareClass::U ? -1 : 1;
            for (int sigma : {1, -1}) {
                // f(0) = 0, f(1) = sigma; lam f(n) = sigma p^2 f(n+1) + [unit, n=1] sqrt p chi f(n) + sigma f(n-1)
                std::vector<cplx> f(26, 0);
                f[1] = sigma;
                for (int n = 1; n + 1 < 26; ++n) {
                    const cplx mid = unit && n == 1 ? sp * chi * f[n] : cplx(0);
                    f[n + 1] = (lam * f[n] - mid - double(sigma) * f[n - 1]) / (sigma * p * p);
                }
                for (int n = 0; n < 26; ++n) REQUIRE(close(metaplectic_whittaker0(5, n, g, xi, sigma), f[n], 1e-8));
            }
        }
}

TEST_CASE("depth 1 whittaker and eigenvalue constraint") {
    CHECK(whittaker1(2, 0.3) == cplx(1));
    CHECK(whittaker1(1, 0.3) == cplx(0));
    CHECK(close(whittaker1(5, cplx(0.5, 0.5)), std::pow(cplx(0.5, 0.5), 3), 1e-15));
    CHECK(whittaker1_recursion_check(-0.2, 30).ok);
    auto m = whittaker1_mellin_check(5, -0.2, 2.0);
    CHECK(m.ok);
    CHECK_THROWS_AS(whittaker1_mellin_check(5, 100.0, 1.0), PreconditionError);

    for (auto p : {5u, 13u}) {
        auto d = depth1_constraint_check(p);
        CHECK(d.support_consistent);
        CHECK(d.ok);
        REQUIRE(d.admissible.size() == 2);
        CHECK(std::abs(d.admissible[0] + std::sqrt(double(p))) < 1e-9);
        CHECK(std::abs(d.admissible[1] - std::sqrt(double(p))) < 1e-9);
        for (auto w : d.eigenvalues) CHECK(std::abs(w * w - double(p)) < 1e-9);
    }
}

TEST_CASE("metaplectic hecke operator") {
    const Poly Pp = P({1, 1});
    CHECK(apply_metaplectic_hecke(CoeffFamily{}, Pp).empty());
    const cplx g1 = gauss_sum_rational(P({1}), Pp).value;

    // delta at a with P | a: nothing lands on (a, m)
    const Poly a = Pp * P({2, 1});
    auto out = apply_metaplectic_hecke(CoeffFamily{{{a, 4}, 1.0}}, Pp);
    CHECK(out.count({a, 4}) == 0);
    // the |P|^2 term appears at (a/P^2 ...) only when P^2 | a; here it lands at (a P^2, 6)
    CHECK(out.size() == 1);
    CHECK(close(out.at({a * Pp * Pp, 6}), 1.0, 1e-14));

    // delta at a coprime to P: middle term G_1(P)(a/P)
    const Poly b = P({2, 0, 1});
    out = apply_metaplectic_hecke(CoeffFamily{{{b, 2}, 1.0}}, Pp);
    const double leg = to_int(legendre(b, FinitePlace(Pp)));
    CHECK(close(out.at({b, 2}), g1 * leg, 1e-12));

    // delta at P^2 c: the first term reaches (c, m - 2)
    const Poly c = P({3, 1});
    out = apply_metaplectic_hecke(CoeffFamily{{{c * Pp * Pp, 6}, 1.0}}, Pp);
    CHECK(close(out.at({c, 4}), 25.0, 1e-12));

    CHECK_THROWS_AS(apply_metaplectic_hecke(CoeffFamily{{{b, 3}, 1.0}}, Pp), PreconditionError);
    CHECK_THROWS_AS(apply_metaplectic_hecke(CoeffFamily{}, P({4, 0, 1})), PreconditionError);
}

TEST_CASE("unary theta family under the hecke operator") {
    auto e = unary_theta_eigen_check(P({1, 1}));
    CHECK(e.is_eigen);
    CHECK(e.checked > 50);
    MESSAGE("unary theta eigenvalue at T+1: " << e.eigenvalue);
    // measured value, frozen as a regression artifact
    CHECK(close(e.eigenvalue, std::pow(5.0, 1.5) + std::sqrt(5.0), 1e-10));
    auto e2 = unary_theta_eigen_check(P({2, 0, 1}), 4, 12);
    CHECK(e2.is_eigen);
    MESSAGE("unary theta eigenvalue at T^2+2: " << e2.eigenvalue);
    // perturbing one coefficient breaks the eigen property
    auto fam = unary_theta_family(F5(), 3, 10);
    fam[{P({1}), 0}] += 0.5;
    auto out = apply_metaplectic_hecke(fam, P({1, 1}));
    CHECK_FALSE(std::abs(out.at({P({1}), 0}) - e.eigenvalue * fam.at({P({1}), 0})) < 1e-6);
}

TEST_CASE("integral hecke multiplicativity") {
    const auto& F = F5();
    auto ones = hecke_table_from_recursion(F, 4, [](const Poly& Q) { return cplx(1 + std::pow(5.0, -Q.degree())); });
    // lambda_P = 1 + |P|^{-1} gives sum_{d | a, d monic} |d|^{-1}
    for (const auto& [a, v] : ones.lambda) {
        double s = 0;
        for (int dd = 0; dd <= a.degree(); ++dd)
            for (const auto& d : dd == 0 ? std::vector<Poly>{P({1})} : enumerate_monic(F, dd))
                if (divides(d, a)) s += std::pow(5.0, -dd);
        CHECK(close(v, s, 1e-12));
    }
    const Poly Pp = P({1, 1});
    CHECK(integral_hecke_multiplicativity_check(ones, Pp, P({2, 1})));
    CHECK(integral_hecke_multiplicativity_check(ones, Pp, P({1})));
    CHECK(integral_hecke_relation_check(ones, Pp, Pp * P({2, 1})));

    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> u(-2, 2);
    std::map<Poly, cplx> chosen;
    auto tab = hecke_table_from_recursion(F, 4, [&](const Poly& Q) {
        auto it = chosen.find(Q);
        if (it == chosen.end()) it = chosen.emplace(Q, cplx(u(rng), u(rng))).first;
        return it->second;
    });
    int checked = 0;
    for (const auto& Q : monic_irreducibles(F, 1))
        for (const auto& [a, v] : tab.lambda) {
            if (a.degree() > 3) continue;
            REQUIRE(integral_hecke_relation_check(tab, Q, a));
            if (gcd(a, Q).is_one()) {
                REQUIRE(integral_hecke_multiplicativity_check(tab, Q, a));
                ++checked;
            }
        }
    CHECK(checked > 100);
    // a = 1: lambda(P) = lambda_P lambda(1)
    CHECK(close(tab.lambda.at(Pp), chosen.at(Pp), 1e-14));

    // violated table
    auto bad = tab;
    bad.lambda[Pp * P({2, 1})] += 0.1;
    CHECK_FALSE(integral_hecke_multiplicativity_check(bad, Pp, P({2, 1})));
    CHECK_FALSE(integral_hecke_relation_check(bad, Pp, P({2, 1})));
    CHECK_THROWS_AS(integral_hecke_multiplicativity_check(tab, Pp, Pp), PreconditionError);
    CHECK_THROWS_AS(integral_hecke_multiplicativity_check(tab, Pp, P({1, 0, 0, 0, 1})), PreconditionError);
}

TEST_CASE("identity suite is deterministic and passes") {
    auto a = run_identity_suite(7, false);
    auto b = run_identity_suite(7, false);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        INFO(a.results[i].name);
        CHECK(a.results[i].pass());
        CHECK(a.results[i].cases == b.results[i].cases);
        CHECK(a.results[i].max_residual == b.results[i].max_residual);
    }
    CHECK(a.pass());
}
