#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace arqft {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long n, long long d = 1) { return Rational(BigInt(n), BigInt(d)); }

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace arqft
