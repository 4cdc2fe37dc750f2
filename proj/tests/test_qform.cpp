#include <doctest.h>

#include "arqft/errors.hpp"
#include "arqft/qform.hpp"
#include "form_gen.hpp"
#include "oracles.hpp"

#include <map>
#include <random>
#include <set>

using namespace arqft;

namespace {
const PrimeModulus& F5() { return PrimeModulus::get(5); }
Poly P(std::initializer_list<std::int64_t> c) { return Poly::from_ints(F5(), c); }

// every vector with deg v_j <= b_j and Q(v) = D, straight evaluation
std::size_t brute_count(const TernaryForm& Q, const Poly& D, std::array<int, 3> b) {
    const auto& F = Q.field();
    std::array<std::vector<Poly>, 3> vs;
    for (int j = 0; j < 3; ++j) {
        std::uint64_t n = 1;
        for (int i = 0; i <= b[j]; ++i) n *= F.p();
        for (std::uint64_t i = 0; i < n; ++i) vs[j].push_back(poly_from_index(F, b[j] + 1, i));
    }
    std::size_t c = 0;
    for (const auto& x : vs[0])
        for (const auto& y : vs[1])
            for (const auto& z : vs[2])
                if (Q.evaluate({x, y, z}) == D) ++c;
    return c;
}

std::array<int, 3> widened(const std::array<int, 3>& b) { return {b[0] + 1, b[1] + 1, b[2] + 1}; }

const GenusSet& q1_genus() {
    static const GenusSet G = genus_enumerate(gen::q1(), good_linear_primes(gen::q1()));
    return G;
}
}  // namespace

TEST_CASE("discriminant examples") {
    CHECK(discriminant(gen::q1()) == P({2, 2, 0, 2}));
    CHECK(discriminant(gen::q2()) == P({2, 2, 0, 2}));
    CHECK(gen::q2().determinant() == P({2, 2, 0, 2}));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const auto Q = gen::random_anisotropic(F5(), rng);
        const auto g = gen::random_unimodular(F5(), 2, rng);
        CHECK(same_square_class(Q.transformed(g).determinant(), Q.determinant()));
        CHECK(discriminant(Q.transformed(g)) == discriminant(Q));
    }
    CHECK_THROWS_AS(TernaryForm::diagonal(P({1}), P({}), P({1})), PreconditionError);
}

TEST_CASE("diagonalization at infinity") {
    const auto Q = TernaryForm::diagonal(P({1}), P({0, 1}), P({2}));
    const auto dz = diagonalize_at_infty(Q);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(dz.S[i][j] == RationalFunction(Poly::constant(F5(), i == j)));
    const auto d1 = diagonalize_at_infty(gen::q1());
    CHECK(d1.classes[0] == SquareClass::One);
    CHECK(d1.classes[1] == SquareClass::Pi);
    CHECK(d1.classes[2] == SquareClass::U);

    std::mt19937_64 rng(2);
    std::vector<TernaryForm> forms{gen::q2()};
    for (int i = 0; i < 30; ++i) {
        const auto g = gen::random_unimodular(F5(), 2, rng);
        forms.push_back(gen::q1().transformed(g));
    }
    // zero diagonal forces the off-diagonal pivot path
    Mat3 h = identity_mat3(F5());
    h[0][0] = h[1][1] = Poly(F5());
    h[0][1] = h[1][0] = P({0, 1});
    forms.emplace_back(h);
    for (const auto& Q2 : forms) {
        const auto dz2 = diagonalize_at_infty(Q2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                RationalFunction s(F5());
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        s = s + dz2.S[a][i] * RationalFunction(Q2.entry(a, b)) * dz2.S[b][j];
                CHECK(s == (i == j ? dz2.d[i] : RationalFunction(F5())));
            }
    }
}

TEST_CASE("anisotropy at infinity") {
    CHECK(is_anisotropic_infty(gen::q1()));
    CHECK(is_anisotropic_infty(gen::q2()));
    CHECK_FALSE(is_anisotropic_infty(TernaryForm::diagonal(P({1}), P({-1}), P({0, 1}))));
    std::mt19937_64 rng(3);
    int iso = 0, aniso = 0;
    for (int n = 0; n < 200; ++n) {
        Mat3 g = identity_mat3(F5());
        for (int i = 0; i < 3; ++i) g[i][i] = oracle::random_nonzero(F5(), 2, rng);
        g[0][1] = g[1][0] = oracle::random_poly(F5(), 1, rng);
        if (mat3_det(g).is_zero()) continue;
        const TernaryForm Q(g);
        const bool an = is_anisotropic_infty(Q);
        an ? ++aniso : ++iso;
        // local oracle on the diagonal values
        const auto dz = diagonalize_at_infty(Q);
        const auto& d = dz.d;
        CHECK(an == (oracle::hilbert_local_brute(-(d[0] * d[2]), -(d[1] * d[2]), nullptr) < 0));
        // a global zero with small coordinates forces isotropy at infinity
        bool zero = false;
        for (std::uint64_t a = 0; a < 25 && !zero; ++a)
            for (std::uint64_t b = 0; b < 25 && !zero; ++b)
                for (std::uint64_t c = 0; c < 25 && !zero; ++c) {
                    if (a + b + c == 0) continue;
                    zero = Q.evaluate({poly_from_index(F5(), 2, a), poly_from_index(F5(), 2, b), poly_from_index(F5(), 2, c)}).is_zero();
                }
        if (zero) CHECK_FALSE(an);
    }
    CHECK(iso > 10);
    CHECK(aniso > 10);
}

TEST_CASE("ultrametric evaluation on anisotropic diagonalizations") {
    std::mt19937_64 rng(4);
    int checked = 0;
    for (int f = 0; f < 20; ++f) {
        const auto Q = f == 0 ? gen::q1() : gen::random_anisotropic(F5(), rng);
        const auto d = diagonalize_at_infty(Q).d;
        for (int n = 0; n < 500; ++n) {
            RationalFunction sum(F5());
            int best = 1 << 20;
            for (int i = 0; i < 3; ++i) {
                const RationalFunction c(oracle::random_poly(F5(), 3, rng), oracle::random_nonzero(F5(), 2, rng));
                if (c.is_zero()) continue;
                const auto term = d[i] * c * c;
                sum = sum + term;
                best = std::min(best, term.valuation_infty());
            }
            if (best == (1 << 20)) continue;
            REQUIRE_FALSE(sum.is_zero());
            CHECK(sum.valuation_infty() == best);
            ++checked;
        }
    }
    CHECK(checked > 9000);
}

TEST_CASE("representation examples") {
    const auto r2 = representations(gen::q2(), P({0, 1}));
    CHECK(r2.count() >= 1);
    CHECK(std::find(r2.solutions.begin(), r2.solutions.end(), Vec3{P({}), P({1}), P({})}) != r2.solutions.end());
    for (int a = 0; a < 5; ++a)
        for (int b = 1; b < 5; ++b) CHECK(representations(gen::q1(), P({a, b})).count() == 0);
    const auto r1 = representations(gen::q1(), P({1}));
    CHECK(r1.count() >= 2);
    CHECK(r1.count() % 2 == 0);
    CHECK(std::find(r1.solutions.begin(), r1.solutions.end(), Vec3{P({1}), P({}), P({})}) != r1.solutions.end());
    CHECK(std::find(r1.solutions.begin(), r1.solutions.end(), Vec3{P({-1}), P({}), P({})}) != r1.solutions.end());
    CHECK_THROWS_AS(representations(TernaryForm::diagonal(P({1}), P({-1}), P({0, 1})), P({1})), PreconditionError);
    CHECK_THROWS_AS(representations(gen::q1(), P({})), PreconditionError);
}

TEST_CASE("representation sets are exact, duplicate-free and sign-closed") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 30; ++n) {
        const auto Q = n < 3 ? (n % 2 ? gen::q1() : gen::q2()) : gen::random_anisotropic(F5(), rng);
        const Poly D = oracle::random_nonzero(F5(), 5, rng);
        const auto rs = representations(Q, D);
        std::set<std::vector<std::vector<Coeff>>> seen;
        for (const auto& v : rs.solutions) {
            CHECK(Q.evaluate(v) == D);
            CHECK(seen.insert({v[0].coeffs(), v[1].coeffs(), v[2].coeffs()}).second);
            const Vec3 w{-v[0], -v[1], -v[2]};
            CHECK(std::find(rs.solutions.begin(), rs.solutions.end(), w) != rs.solutions.end());
        }
    }
}

TEST_CASE("representation counts match a brute-force box") {
    std::mt19937_64 rng(6);
    for (int n = 0; n < 12; ++n) {
        const auto Q = n == 0 ? gen::q2() : gen::random_anisotropic(F5(), rng, 4);
        const Poly D = oracle::random_nonzero(F5(), 2, rng);
        const auto rs = representations(Q, D);
        const auto b = widened(rs.bounds);
        if (b[0] + b[1] + b[2] > 7) continue;
        CHECK(rs.count() == brute_count(Q, D, b));
    }
    for (const Poly& D : {P({0, 1}), P({3, 0, 1}), P({1, 2, 1})}) {
        const auto r1 = representations(gen::q1(), D);
        CHECK(r1.count() == brute_count(gen::q1(), D, widened(r1.bounds)));
        const auto r2 = representations(gen::q2(), D);
        CHECK(r2.count() == brute_count(gen::q2(), D, widened(r2.bounds)));
    }
}

TEST_CASE("theta histogram agrees with targeted enumeration") {
    std::mt19937_64 rng(7);
    for (const auto& Q : {gen::q1(), gen::q2(), gen::random_anisotropic(F5(), rng)}) {
        const auto h = theta_counts(Q, 4);
        CHECK(h[0] == 1);
        for (int n = 0; n < 40; ++n) {
            const Poly D = oracle::random_nonzero(F5(), 4, rng);
            CHECK(h[poly_index(D)] == representations(Q, D).count());
        }
    }
}

TEST_CASE("enumeration completeness under widened bounds") {
    std::mt19937_64 rng(8);
    for (int n = 0; n < 10; ++n) {
        const auto Q = n == 0 ? gen::q1() : gen::random_anisotropic(F5(), rng);
        const Poly D = oracle::random_nonzero(F5(), n == 0 ? 5 : 3, rng);
        const auto rep = widened_check(Q, D);
        CHECK(rep.complete);
        CHECK(rep.widened == rep.boxed);
    }
}

TEST_CASE("representation counts are invariant under basis change") {
    std::mt19937_64 rng(9);
    for (int n = 0; n < 6; ++n) {
        const auto Q = n == 0 ? gen::q1() : gen::random_anisotropic(F5(), rng);
        const Poly D = oracle::random_nonzero(F5(), 4, rng);
        const auto base = representations(Q, D).count();
        for (int k = 0; k < 3; ++k) {
            const auto g = gen::random_unimodular(F5(), 2, rng);
            CHECK(representations(Q.transformed(g), D).count() == base);
        }
    }
}

TEST_CASE("automorphism counts") {
    // independent: all matrices whose columns have coordinate degree <= 1
    const auto Q = gen::q1();
    std::vector<Vec3> small;
    for (std::uint64_t a = 0; a < 25; ++a)
        for (std::uint64_t b = 0; b < 25; ++b)
            for (std::uint64_t c = 0; c < 25; ++c)
                small.push_back({poly_from_index(F5(), 2, a), poly_from_index(F5(), 2, b), poly_from_index(F5(), 2, c)});
    std::array<std::vector<Vec3>, 3> cols;
    for (const auto& v : small)
        for (int i = 0; i < 3; ++i)
            if (Q.evaluate(v) == Q.entry(i, i)) cols[i].push_back(v);
    std::size_t brute = 0;
    for (const auto& a : cols[0])
        for (const auto& b : cols[1])
            for (const auto& c : cols[2]) {
                Mat3 g = identity_mat3(F5());
                for (int r = 0; r < 3; ++r) {
                    g[r][0] = a[r];
                    g[r][1] = b[r];
                    g[r][2] = c[r];
                }
                if (mat3_det(g).is_one() && Q.transformed(g) == Q) ++brute;
            }
    CHECK(brute == 12);
    CHECK(automorphism_count(Q) == 12);
    CHECK(automorphism_count(gen::q2()) >= 1);
    CHECK(automorphism_count(gen::q2()) % 2 == 0);
    std::mt19937_64 rng(10);
    for (int n = 0; n < 8; ++n) {
        const auto R = n < 4 ? gen::q1() : gen::random_anisotropic(F5(), rng);
        const auto g = gen::random_unimodular(F5(), 2, rng);
        CHECK(automorphism_count(R.transformed(g)) == automorphism_count(R));
    }
}

TEST_CASE("isometry search") {
    const auto id = is_isometric(gen::q1(), gen::q1());
    REQUIRE(id);
    CHECK(gen::q1().transformed(*id) == gen::q1());
    std::mt19937_64 rng(11);
    for (int n = 0; n < 10; ++n) {
        const auto Q = n % 2 ? gen::q2() : gen::random_anisotropic(F5(), rng);
        const auto g = gen::random_unimodular(F5(), 2, rng);
        const auto R = Q.transformed(g);
        const auto h = is_isometric(Q, R);
        REQUIRE(h);
        CHECK(Q.transformed(*h) == R);
        CHECK(mat3_det(*h).degree() == 0);
    }
    CHECK_FALSE(is_isometric(gen::q1(), gen::q2()));
    CHECK_FALSE(is_isometric(gen::q1(), TernaryForm::diagonal(P({1}), P({1, 1, 0, 1}), P({1}))));
}

TEST_CASE("genus test") {
    CHECK(same_genus(gen::q1(), gen::q2()));
    CHECK(same_genus(gen::q1(), gen::q1()));
    CHECK(jordan_class(gen::q1(), P({1, 1, 0, 1})) == jordan_class(gen::q2(), P({1, 1, 0, 1})));
    CHECK_FALSE(same_genus(gen::q1(), TernaryForm::diagonal(P({1}), P({2, 1, 0, 1}), P({2}))));
    CHECK_FALSE(same_genus(gen::q1(), TernaryForm::diagonal(P({1}), P({1, 1, 0, 1}), P({1}))));
    // same disc, other Jordan class at T^3+T+1
    const auto other = TernaryForm::diagonal(P({2}), P({2, 2, 0, 2}), P({2}));
    CHECK(same_square_class(other.determinant(), gen::q1().determinant()));
    CHECK(jordan_class(other, P({1, 1, 0, 1})) != jordan_class(gen::q1(), P({1, 1, 0, 1})));
    CHECK_FALSE(same_genus(gen::q1(), other));
    CHECK_THROWS_AS(same_genus(TernaryForm::diagonal(P({1}), P({0, 0, 1}), P({2})), gen::q1()), PreconditionError);

    // equivalence relation on a pool
    std::mt19937_64 rng(12);
    std::vector<TernaryForm> pool{gen::q1(), gen::q2(), other, TernaryForm::diagonal(P({1}), P({1, 1, 0, 1}), P({1}))};
    for (int i = 0; i < 4; ++i) pool.push_back(pool[i % 3].transformed(gen::random_unimodular(F5(), 2, rng)));
    for (const auto& a : pool) {
        CHECK(same_genus(a, a));
        for (const auto& b : pool) {
            CHECK(same_genus(a, b) == same_genus(b, a));
            for (const auto& c : pool)
                if (same_genus(a, b) && same_genus(b, c)) CHECK(same_genus(a, c));
        }
    }
}

TEST_CASE("neighbors stay in the genus") {
    for (const auto& Q : {gen::q1(), gen::q2()})
        for (const Poly& Pr : good_linear_primes(Q)) {
            const auto nb = neighbors(Q, Pr);
            CHECK(nb.size() == 6);   // isotropic lines of a conic over F_5
            for (const auto& f : nb) {
                CHECK(same_square_class(f.determinant(), Q.determinant()));
                CHECK(same_genus(f, Q));
            }
        }
    CHECK_THROWS_AS(neighbors(gen::q1(), P({1, 1, 0, 1})), PreconditionError);
}

TEST_CASE("genus walk of the example form") {
    const auto& G = q1_genus();
    CHECK(G.certified);
    CHECK(G.reps.size() == G.aut.size());
    bool has_q2 = false;
    for (std::size_t i = 0; i < G.reps.size(); ++i) {
        CHECK(same_genus(G.reps[i], gen::q1()));
        has_q2 = has_q2 || is_isometric(G.reps[i], gen::q2()).has_value();
        for (std::size_t j = i + 1; j < G.reps.size(); ++j) CHECK_FALSE(is_isometric(G.reps[i], G.reps[j]));
    }
    CHECK(has_q2);
    Rational w = 0;
    for (auto a : G.aut) w += Rational(BigInt(1), BigInt(a));
    CHECK(w == G.weight);
    MESSAGE("genus classes " << G.reps.size() << ", weight " << to_string(G.weight));
}

TEST_CASE("genus averages") {
    GenusSet single;
    single.reps = {gen::q1()};
    single.aut = {12};
    single.weight = Rational(BigInt(1), BigInt(12));
    for (const Poly& D : {P({1}), P({2, 0, 1}), P({1, 1, 0, 1})})
        CHECK(genus_rep_count(single, D) == Rational(representations(gen::q1(), D).count()));
    const auto& G = q1_genus();
    // constant terms of both theta series count the zero vector once
    std::vector<std::uint64_t> zero(G.reps.size(), 1);
    CHECK(genus_average(G, zero) == 1);
}

TEST_CASE("closed-form local densities") {
    const auto Q = gen::q1();
    const Poly disc = Q.determinant();
    int plus = 0, minus = 0;
    for (int a = 0; a < 5; ++a) {
        const Poly Pl = P({a, 1});
        for (int c = 1; c < 5; ++c) {
            const Poly D = P({c});
            const auto df = local_density_closed(Q, Pl, D);
            const int s = to_int(legendre(D * disc, FinitePlace(Pl)));
            CHECK(df.value == (s > 0 ? make_rational(6, 5) : make_rational(4, 5)));
            s > 0 ? ++plus : ++minus;
        }
        CHECK(local_density_closed(Q, Pl, Pl * P({2, 0, 1})).value == make_rational(24, 25));
    }
    CHECK(plus > 0);
    CHECK(minus > 0);
    CHECK_THROWS_AS(local_density_closed(Q, P({1, 1, 0, 1}), P({1})), PreconditionError);
    CHECK_THROWS_AS(local_density_closed(Q, P({0, 1}), P({0, 0, 1})), PreconditionError);
}

TEST_CASE("counted local densities match the closed form") {
    std::mt19937_64 rng(13);
    for (int n = 0; n < 15; ++n) {
        const auto Q = n < 2 ? gen::q1() : gen::random_anisotropic(F5(), rng);
        Poly D = oracle::random_nonzero(F5(), 4, rng);
        const Poly disc = Q.determinant();
        for (int a = 0; a < 5; ++a) {
            const Poly Pl = P({a, 1});
            if (divides(Pl, disc)) continue;
            Poly Dw = D;
            if (n % 3 == 0) Dw = D * Pl;
            if (valuation(Dw, Pl) > 1) continue;
            const auto closed = local_density_closed(Q, Pl, Dw);
            const auto counted = local_density_counted(Q, Pl, Dw);
            CHECK(closed.value == counted.value);
        }
    }
    // a degree-2 place through the generic counting path
    const Poly P2 = P({2, 0, 1});
    REQUIRE(is_irreducible(P2));
    CHECK(density_count(gen::q1(), P2, P({1}), 1) == local_density_closed(gen::q1(), P2, P({1})).value);
    CHECK_THROWS_AS(density_count(gen::q1(), P({0, 1}), P({1}), 9, 1000), BudgetExceeded);
}

TEST_CASE("local obstructions") {
    const auto Q = gen::q1();
    const auto& G = q1_genus();
    // lead non-square, odd degree: class uT is not represented at infinity
    for (int a = 0; a < 5; ++a) {
        const Poly D = P({a, 2});
        const auto rep = local_obstruction_check(Q, D);
        CHECK(rep.infty_obstructed);
        CHECK(rep.obstructed());
        CHECK(genus_rep_count(G, D) == 0);
    }
    const auto ok = local_obstruction_check(Q, P({0, 1}));
    CHECK_FALSE(ok.obstructed());
    CHECK(genus_rep_count(G, P({0, 1})) > 0);
    // represented globally implies represented at infinity
    std::mt19937_64 rng(14);
    for (int n = 0; n < 60; ++n) {
        const Poly D = oracle::random_nonzero(F5(), 4, rng);
        if (representations(Q, D).count() > 0) CHECK(represented_at_infty(Q, D));
        if (!represented_at_infty(Q, D)) CHECK(genus_rep_count(G, D) == 0);
    }
}

TEST_CASE("admissibility filter") {
    const auto Q = gen::q1();
    CHECK(admissibility(Q, P({0, 1})) == "");
    CHECK(admissibility(Q, P({0, 0, 1})) == "not square-free");
    CHECK(admissibility(Q, P({1, 1, 0, 1})) == "shares a factor with disc");
    CHECK(admissibility(Q, P({1, 0, 1})) == "degree parity");
}

TEST_CASE("Siegel ratio is constant over the example genus") {
    const auto& G = q1_genus();
    std::vector<Poly> Ds;
    for (int d : {3, 5})
        for (int k = 0; k < 12; ++k) Ds.push_back(monic_from_index(F5(), d, 11 * k + 2));
    const auto S = siegel_ratio_scan(gen::q1(), G, Ds);
    CHECK(S.rows.size() >= 10);
    CHECK(S.constant);
    REQUIRE(S.constants.size() == 1);
    CHECK(S.constants[0].second == make_rational(252, 125));
    MESSAGE("ratio " << to_string(S.constants[0].second));
}

TEST_CASE("residual scan structure") {
    const auto& G = q1_genus();
    const auto R = residual_scan(gen::q1(), G, {1, 3});
    CHECK(R.theta_constant_terms_agree);
    CHECK(R.lower_bound > 0);
    CHECK(R.skipped > 0);
    for (const auto& row : R.rows) {
        CHECK(row.e == Rational(BigInt(row.r_form)) - row.r_genus);
        if (row.obstructed) CHECK(row.r_form == 0);
        if (row.D.degree() == 1) CHECK(row.r_form == 0);
    }
}
