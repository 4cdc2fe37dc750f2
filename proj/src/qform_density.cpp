#include "arqft/errors.hpp"
#include "arqft/qform.hpp"
#include "arqft/zeta.hpp"
#include "qform_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace arqft {

namespace {
Rational inv_pow(std::uint64_t q, int e) {
    BigInt d = 1;
    for (int i = 0; i < e; ++i) d *= q;
    return Rational(BigInt(1), d);
}
}  // namespace

DensityFactor local_density_closed(const TernaryForm& Q, const Poly& P_in, const Poly& D) {
    const Poly P = P_in.monic();
    const Poly disc = Q.determinant();
    if (D.is_zero()) throw PreconditionError("density of 0");
    if (divides(P, disc)) throw PreconditionError("closed form needs a place not dividing disc");
    const int v = valuation(D, P);
    const std::uint64_t q = norm(P);
    DensityFactor out{P, 0, DensityFactor::Method::ClosedForm};
    if (v == 0) {
        const int s = to_int(legendre(D * disc, FinitePlace(P)));
        out.value = 1 + s * inv_pow(q, 1);
    } else if (v == 1) {
        out.value = 1 - inv_pow(q, 2);
    } else {
        throw PreconditionError("closed form needs v_P(D) <= 1");
    }
    return out;
}

Rational density_count(const TernaryForm& Q, const Poly& P_in, const Poly& D, int r, std::uint64_t budget) {
    if (r < 1) throw PreconditionError("density count needs r >= 1");
    const Poly P = P_in.monic();
    const PrimeModulus& F = Q.field();
    const int n = r * P.degree();
    const std::uint64_t q = norm(P);
    if (3.0 * n * std::log(static_cast<double>(F.p())) > std::log(static_cast<double>(budget)) + 1e-9)
        throw BudgetExceeded("density count exceeds budget");
    std::uint64_t count = 0;
    if (P.degree() == 1) {
        // move the place to T and count mod T^r with the kernel
        const Coeff root = F.neg(P.coeff(0));
        Mat3 G = Q.gram();
        for (auto& row : G)
            for (auto& e : row) e = e.taylor_shift(root);
        const TernaryForm Qs(G);
        const Poly Ds = D.taylor_shift(root).truncated(r);
        detail::BoxEngine eng(Qs, {r - 1, r - 1, r - 1}, r - 1, true);
        const auto target = static_cast<std::int32_t>(poly_index(Ds));
        std::vector<std::int32_t> keys;
        for (std::uint64_t ix = 0; ix < eng.nx(); ++ix)
            eng.run_x(ix, keys, [&](const Poly&, const Poly&, const std::vector<std::int32_t>& k) {
                count += static_cast<std::uint64_t>(std::count(k.begin(), k.end(), target));
            });
    } else {
        const Poly Pr = pow(P, r);
        const Poly Dr = D % Pr;
        const std::uint64_t m = detail::ipow(F.p(), n);
        for (std::uint64_t a = 0; a < m; ++a)
            for (std::uint64_t b = 0; b < m; ++b)
                for (std::uint64_t c = 0; c < m; ++c) {
                    const Vec3 l{poly_from_index(F, n, a), poly_from_index(F, n, b), poly_from_index(F, n, c)};
                    if (Q.evaluate(l) % Pr == Dr) ++count;
                }
    }
    return Rational(BigInt(count)) * inv_pow(q, 2 * r);
}

DensityFactor local_density_counted(const TernaryForm& Q, const Poly& P, const Poly& D, std::uint64_t budget) {
    if (D.is_zero()) throw PreconditionError("density of 0");
    const int v = valuation(D, P.monic());
    const Rational a = density_count(Q, P, D, v + 1, budget);
    const Rational b = density_count(Q, P, D, v + 2, budget);
    if (a != b) throw CheckFailure("density count did not stabilize");
    return DensityFactor{P.monic(), a, DensityFactor::Method::Counted};
}

bool represented_at_infty(const TernaryForm& Q, const Poly& D) {
    if (D.is_zero()) return true;
    const auto dz = diagonalize_at_infty(Q);
    const std::array<RationalFunction, 4> a{dz.d[0], dz.d[1], dz.d[2], RationalFunction(-D)};
    const RationalFunction det = a[0] * a[1] * a[2] * a[3];
    if (square_class_infty(det) != SquareClass::One) return true;
    int hasse = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) hasse *= to_int(hilbert_infty(a[i], a[j]));
    const PrimeModulus& F = Q.field();
    const RationalFunction m1(Poly::constant(F, -1));
    // a quaternary form of square discriminant is anisotropic iff its Hasse invariant is -(-1,-1)
    return hasse != -to_int(hilbert_infty(m1, m1));
}

bool ObstructionReport::obstructed() const {
    return std::any_of(places.begin(), places.end(), [](const PlaceVerdict& v) { return !v.solvable; });
}

namespace {
// a nonsingular solution of Q(l) = D mod P lifts by Hensel
bool hensel_witness(const TernaryForm& Q, const ResidueField& K, const std::vector<Poly>& el, const Poly& D) {
    const Poly Dm = K.reduce(D);
    for (const Poly& a : el)
        for (const Poly& b : el)
            for (const Poly& c : el) {
                const Vec3 l{a, b, c};
                if (K.reduce(Q.evaluate(l)) != Dm) continue;
                const Vec3 g = mat3_apply(Q.gram(), l);
                if (!K.reduce(g[0]).is_zero() || !K.reduce(g[1]).is_zero() || !K.reduce(g[2]).is_zero()) return true;
            }
    return false;
}

const char* witness_text(bool found) { return found ? "counted, Hensel witness" : "counted, no nonsingular witness"; }
}  // namespace

ObstructionReport local_obstruction_check(const TernaryForm& Q, const Poly& D) {
    if (D.is_zero()) throw PreconditionError("obstruction check of 0");
    const Poly disc = Q.determinant();
    ObstructionReport out;
    if (disc.degree() > 0)
        for (const auto& [P, e] : factor(disc)) {
            const ResidueField K(P);
            const bool found = hensel_witness(Q, K, K.elements(), D);
            out.places.push_back({P.to_string(), found, witness_text(found)});
        }
    if (D.degree() > 0)
        for (const auto& [P, e] : factor(D)) {
            if (divides(P, disc)) continue;
            if (e <= 1) {
                const auto df = local_density_closed(Q, P, D);
                out.places.push_back({P.to_string(), df.value > 0, "closed form " + to_string(df.value)});
            } else {
                out.places.push_back({P.to_string(), true, "unimodular ternary, universal"});
            }
        }
    const bool inf = represented_at_infty(Q, D);
    out.infty_obstructed = !inf;
    out.places.push_back({"inf", inf, "square classes"});
    return out;
}

std::string admissibility(const TernaryForm& Q, const Poly& D) {
    if (D.is_zero()) return "zero";
    if (!is_squarefree(D)) return "not square-free";
    const Poly disc = Q.determinant();
    if (!gcd(D, disc).is_one()) return "shares a factor with disc";
    if ((D.degree() - disc.degree()) % 2 != 0) return "degree parity";
    return "";
}

SiegelReport siegel_ratio_scan(const TernaryForm& Q, const GenusSet& G, const std::vector<Poly>& Ds) {
    const PrimeModulus& F = Q.field();
    const Poly disc = Q.determinant();
    SiegelReport out;
    Rational bad = 1;
    if (disc.degree() > 0)
        for (const auto& [P, e] : factor(disc)) bad /= (1 - inv_pow(norm(P), 2));
    const Rational zeta2_inv = 1 - inv_pow(F.p(), 1);
    int maxd = 0;
    for (const Poly& D : Ds) maxd = std::max(maxd, D.degree());
    std::vector<std::vector<std::uint64_t>> hist;
    for (const auto& f : G.reps) hist.push_back(theta_counts(f, maxd));
    for (const Poly& D : Ds) {
        const std::string why = admissibility(Q, D);
        if (!why.empty()) {
            out.skipped.emplace_back(D, why);
            continue;
        }
        SiegelRow row{D, 0, 0, 0, square_class_infty(RationalFunction(D))};
        std::vector<std::uint64_t> counts;
        const auto idx = poly_index(D);
        for (const auto& h : hist) counts.push_back(h[idx]);
        row.r_genus = genus_average(G, counts);
        const auto L = l_polynomial(QuadraticDiscriminant::make(D * disc));
        row.good_density = zeta2_inv * bad * central_edge_values(L).edge_exact;
        BigInt scale = 1;
        for (int i = 0; i < D.degree() / 2; ++i) scale *= F.p();
        row.ratio = row.r_genus / (Rational(scale) * row.good_density);
        out.rows.push_back(std::move(row));
    }
    bool same = true;
    for (const auto& r : out.rows) {
        if (r.r_genus == 0) continue;
        auto it = std::find_if(out.constants.begin(), out.constants.end(), [&](const auto& c) { return c.first == r.cls; });
        if (it == out.constants.end())
            out.constants.emplace_back(r.cls, r.ratio);
        else if (it->second != r.ratio)
            same = false;
    }
    out.constant = same && !out.constants.empty();
    return out;
}

ResidualReport residual_scan(const TernaryForm& Q, const GenusSet& G, const std::vector<int>& degrees, unsigned workers) {
    const PrimeModulus& F = Q.field();
    const double lp = std::log(static_cast<double>(F.p()));
    ResidualReport out;
    if (degrees.empty()) return out;
    const int maxd = *std::max_element(degrees.begin(), degrees.end());
    const auto hq = theta_counts(Q, maxd, workers);
    std::vector<std::vector<std::uint64_t>> hist;
    for (const auto& f : G.reps) hist.push_back(theta_counts(f, maxd, workers));
    {
        std::vector<std::uint64_t> c0;
        for (const auto& h : hist) c0.push_back(h[0]);
        out.theta_constant_terms_agree = hq[0] == 1 && genus_average(G, c0) == 1;
    }
    // verdicts for admissible D: good places always solvable (square-free D), bad places depend on
    // D mod P, infinity on the square class of D
    struct BadPlace {
        ResidueField K;
        std::vector<Poly> el;
        std::map<std::vector<Coeff>, bool> seen;
    };
    std::vector<BadPlace> bad;
    const Poly disc = Q.determinant();
    if (disc.degree() > 0)
        for (const auto& [P, e] : factor(disc)) {
            ResidueField K(P);
            auto el = K.elements();
            bad.push_back({std::move(K), std::move(el), {}});
        }
    std::map<SquareClass, bool> inf_seen;
    auto obstructed = [&](const Poly& D) {
        const auto cls = square_class_infty(RationalFunction(D));
        auto it = inf_seen.find(cls);
        if (it == inf_seen.end()) it = inf_seen.emplace(cls, represented_at_infty(Q, D)).first;
        if (!it->second) return true;
        for (auto& b : bad) {
            const auto key = b.K.reduce(D).coeffs();
            auto jt = b.seen.find(key);
            if (jt == b.seen.end()) jt = b.seen.emplace(key, hensel_witness(Q, b.K, b.el, D)).first;
            if (!jt->second) return true;
        }
        return false;
    };
    out.exponent_fit = -std::numeric_limits<double>::infinity();
    out.lower_bound = std::numeric_limits<double>::infinity();
    for (int d : degrees) {
        const std::uint64_t lo = detail::ipow(F.p(), d), hi = lo * F.p();
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const Poly D = poly_from_index(F, d + 1, idx);
            if (!admissibility(Q, D).empty()) {
                ++out.skipped;
                continue;
            }
            ResidualRow row{D, hq[idx], 0, 0, std::numeric_limits<double>::quiet_NaN(), false};
            std::vector<std::uint64_t> counts;
            for (const auto& h : hist) counts.push_back(h[idx]);
            row.r_genus = genus_average(G, counts);
            row.e = Rational(BigInt(row.r_form)) - row.r_genus;
            if (row.e != 0) {
                row.log_ratio = std::log(std::abs(to_double(row.e))) / lp / d;
                out.exponent_fit = std::max(out.exponent_fit, row.log_ratio);
            }
            row.obstructed = obstructed(D);
            if (!row.obstructed && d >= 2) {
                const double lb = to_double(row.r_genus) * (std::log(static_cast<double>(d)) / lp) /
                                  std::pow(static_cast<double>(F.p()), d / 2.0);
                out.lower_bound = std::min(out.lower_bound, lb);
            }
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace arqft
