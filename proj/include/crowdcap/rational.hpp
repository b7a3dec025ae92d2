#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace crowdcap {

// Exact rational arithmetic for region checks, means, and hour bookkeeping.
// Queue counts stay int64; Rational is reserved for quantities that may be
// fractional (means, category splits, hour grants).
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline int64_t to_int64(const Rational& r) {
    if (!is_integer(r)) throw std::invalid_argument("rational is not an integer: " + r.str());
    return numerator(r).convert_to<int64_t>();
}

inline Rational floor_rational(const Rational& r) {
    BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return Rational(q);
}

inline int64_t floor_to_int64(const Rational& r) {
    return numerator(floor_rational(r)).convert_to<int64_t>();
}

std::string rational_to_string(const Rational& r);

// Accepts "p/q", integer, or decimal ("0.8" -> 4/5).
Rational parse_rational(const std::string& text);

// Converts via the shortest round-trip decimal form, so 0.8 becomes exactly
// 4/5 rather than the binary double closest to it.
Rational rational_from_double(double x);

} // namespace crowdcap
