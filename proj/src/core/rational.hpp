#ifndef LYAPSYN_RATIONAL_HPP
#define LYAPSYN_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace lyapsyn {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number, always in lowest terms with positive denominator.
// Every coefficient on the synthesis path lives in this type; no rounding
// ever happens here.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt rat_den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

int rat_sign(const Rational& q);

// Integer power with nonnegative exponent.
Rational rat_pow(const Rational& base, unsigned exp);

BigInt factorial(unsigned n);

// Parses "a", "-a", "a/b" with arbitrary-precision parts. Throws
// std::invalid_argument on malformed text or nonpositive denominator.
Rational rat_parse(const std::string& text);

// Canonical text: "a" or "a/b", '-' in front of the numerator.
std::string rat_str(const Rational& q);

// Closest long double; used only by the float oracle.
long double rat_to_ld(const Rational& q);

// Exact rational from a decimal literal like "1.25" or "-0.5".
Rational rat_from_decimal(const std::string& text);

// Simplest rational (minimal denominator, then minimal |numerator|, then
// positive) in the interval between lo and hi; unset bounds mean +-infinity.
// Returns nullopt when the interval is empty.
std::optional<Rational> simplest_rational_between(const std::optional<Rational>& lo, bool lo_strict,
                                                  const std::optional<Rational>& hi, bool hi_strict);

using Point = std::map<std::string, Rational>;
using FloatPoint = std::map<std::string, long double>;

}  // namespace lyapsyn

#endif
