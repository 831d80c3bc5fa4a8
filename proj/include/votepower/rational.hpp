#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "votepower/errors.hpp"

namespace votepower {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

// floor(a / b) for b > 0.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && (a < 0)) q -= 1;
  return q;
}

// ceil(a / b) for b > 0.
inline BigInt ceil_div(const BigInt& a, const BigInt& b) { return -floor_div(-a, b); }

inline BigInt floor_of(const Rational& r) { return floor_div(numerator_of(r), denominator_of(r)); }

// Decimal rendering rounded half-up (away from zero on ties) to `places` digits.
// Presentation only; nothing computed from it flows back into the model.
inline std::string to_decimal(const Rational& value, int places = 2) {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;
  const Rational scaled = magnitude * scale;
  BigInt units = floor_of(scaled + Rational(1, 2));
  const BigInt whole = units / scale;
  const BigInt frac = units % scale;
  std::string out = negative && units != 0 ? "-" : "";
  out += whole.str();
  if (places > 0) {
    std::string digits = frac.str();
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - digits.size(), '0');
    out += digits;
  }
  return out;
}

// `fraction` rendered as a percentage, e.g. 1/6 -> "16.67".
inline std::string to_percent(const Rational& fraction, int places = 2) {
  return to_decimal(fraction * 100, places);
}

inline std::string to_string(const Rational& r) {
  const BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

// Narrowing with an overflow check.
inline std::int64_t to_int64(const BigInt& v, const char* what) {
  if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN))
    throw LimitError(std::string(what) + " does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace votepower
