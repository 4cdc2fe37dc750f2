#pragma once

#include "arqft/exact.hpp"
#include "arqft/field.hpp"
#include "arqft/symbols.hpp"
#include "arqft/ternary.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace arqft {

// square classes of k_infty: unit square, unit non-square, uniformizer, unit non-square times uniformizer
enum class SquareClass { One, U, Pi, UPi };
SquareClass square_class_infty(const RationalFunction& f);
const char* square_class_name(SquareClass c);

using RMat3 = std::array<std::array<RationalFunction, 3>, 3>;

struct InftyDiagonalization {
    RMat3 S;                               // S^T gram S = diag(d)
    std::array<RationalFunction, 3> d;
    std::array<SquareClass, 3> classes;
};
InftyDiagonalization diagonalize_at_infty(const TernaryForm& Q);
bool is_anisotropic_infty(const TernaryForm& Q);

// det(gram) times a unit square so the leading coefficient is 1 or the smallest non-square
Poly discriminant(const TernaryForm& Q);
// a / b is a nonzero constant square
bool same_square_class(const Poly& a, const Poly& b);

// degree bounds on the coordinates of every v with deg Q(v) <= max_deg; -1 means the coordinate is 0
std::array<int, 3> coordinate_bounds(const TernaryForm& Q, int max_deg);

struct RepSet {
    Poly D;
    std::vector<Vec3> solutions;   // sorted
    std::array<int, 3> bounds{};
    std::size_t count() const { return solutions.size(); }
};
// every v with Q(v) = D; throws PreconditionError when Q is isotropic at infinity or D = 0
RepSet representations(const TernaryForm& Q, const Poly& D, unsigned workers = 1,
                       std::uint64_t budget = 400'000'000);
// r_Q(D) for every D with deg D <= max_deg, indexed by poly_index(D); entry 0 counts the zero vector
std::vector<std::uint64_t> theta_counts(const TernaryForm& Q, int max_deg, unsigned workers = 1,
                                        std::uint64_t budget = 400'000'000);

struct CompletenessReport {
    std::size_t boxed = 0;     // solutions inside the derived box
    std::size_t widened = 0;   // solutions with two coordinates widened by `widen`, the third unbounded
    bool complete = false;
};
CompletenessReport widened_check(const TernaryForm& Q, const Poly& D, int widen = 2);

// isometries g with g^T A1 g = A2 (columns are images of the basis); searches on reduced forms
std::optional<Mat3> is_isometric(const TernaryForm& Q1, const TernaryForm& Q2);
// |SO_Q(F_p[T])|, counted on the reduced form
std::uint64_t automorphism_count(const TernaryForm& Q);

// Legendre class of the rank-2 unimodular Jordan component at P || disc
int jordan_class(const TernaryForm& Q, const Poly& P);
// throws PreconditionError on a non-square-free discriminant
bool same_genus(const TernaryForm& Q1, const TernaryForm& Q2);

// basis of short vectors picked greedily by degree of Q(v); the basis matrix goes to *basis
TernaryForm reduce(const TernaryForm& Q, Mat3* basis = nullptr);
// all P-neighbors, reduced; throws PreconditionError when P | disc
std::vector<TernaryForm> neighbors(const TernaryForm& Q, const Poly& P);
// monic degree-1 primes not dividing disc Q
std::vector<Poly> good_linear_primes(const TernaryForm& Q);

struct GenusSet {
    std::vector<TernaryForm> reps;
    std::vector<std::uint64_t> aut;    // |SO| per class
    Rational weight;                   // sum 1/aut
    bool certified = false;            // closure under the first prime is closed under all others
    std::size_t first_prime_classes = 0;
    std::vector<Poly> primes;
};
GenusSet genus_enumerate(const TernaryForm& Q, const std::vector<Poly>& primes, std::size_t max_classes = 64);

// (sum_i r_i / aut_i) / weight
Rational genus_average(const GenusSet& G, const std::vector<std::uint64_t>& counts);
Rational genus_rep_count(const GenusSet& G, const Poly& D);

struct DensityFactor {
    std::optional<Poly> place;   // none means infinity
    Rational value;
    enum class Method { ClosedForm, Counted } method = Method::ClosedForm;
};
// needs P monic irreducible, P not dividing disc, v_P(D) <= 1
DensityFactor local_density_closed(const TernaryForm& Q, const Poly& P, const Poly& D);
// |P|^{-2r} #{l mod P^r : Q(l) = D mod P^r}; BudgetExceeded past `budget` vectors
Rational density_count(const TernaryForm& Q, const Poly& P, const Poly& D, int r,
                       std::uint64_t budget = 50'000'000);
// counts at r = v_P(D)+1 and v_P(D)+2 and requires them to agree (CheckFailure otherwise)
DensityFactor local_density_counted(const TernaryForm& Q, const Poly& P, const Poly& D,
                                    std::uint64_t budget = 50'000'000);

struct PlaceVerdict {
    std::string place;    // polynomial text or "inf"
    bool solvable = false;
    std::string method;
};
struct ObstructionReport {
    std::vector<PlaceVerdict> places;
    bool infty_obstructed = false;
    bool obstructed() const;
};
// D over k_infty: <d1,d2,d3,-D> isotropic
bool represented_at_infty(const TernaryForm& Q, const Poly& D);
ObstructionReport local_obstruction_check(const TernaryForm& Q, const Poly& D);

// square-free, coprime to disc, deg D = deg disc mod 2; empty string when admissible
std::string admissibility(const TernaryForm& Q, const Poly& D);

struct SiegelRow {
    Poly D;
    Rational r_genus;
    Rational good_density;   // product of local densities over all finite places not dividing disc
    Rational ratio;          // r_G / (p^{floor(deg/2)} * good_density); odd degrees share a sqrt(p)
    SquareClass cls = SquareClass::One;
};
struct SiegelReport {
    std::vector<SiegelRow> rows;
    std::vector<std::pair<Poly, std::string>> skipped;
    bool constant = false;   // one value per square class at infinity among rows with r_G > 0
    std::vector<std::pair<SquareClass, Rational>> constants;
};
SiegelReport siegel_ratio_scan(const TernaryForm& Q, const GenusSet& G, const std::vector<Poly>& Ds);

struct ResidualRow {
    Poly D;
    std::uint64_t r_form = 0;
    Rational r_genus;
    Rational e;
    double log_ratio = 0;   // log_p|e| / deg D; NaN when e = 0
    bool obstructed = false;
};
struct ResidualReport {
    std::vector<ResidualRow> rows;
    std::size_t skipped = 0;
    double exponent_fit = 0;    // max log_p|e| / deg D over e != 0
    double lower_bound = 0;     // min r_G log_p log_p|D| / |D|^{1/2}, unobstructed D of degree >= 2
    bool theta_constant_terms_agree = false;
};
ResidualReport residual_scan(const TernaryForm& Q, const GenusSet& G, const std::vector<int>& degrees,
                             unsigned workers = 1);

}  // namespace arqft
