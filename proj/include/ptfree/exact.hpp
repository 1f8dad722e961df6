#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ptfree {

/// Exact rational number; always kept in lowest terms with a positive
/// denominator by the backend.
using ExactValue = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline ExactValue make_rational(std::int64_t num, std::int64_t den = 1) {
  return ExactValue(BigInt(num), BigInt(den));
}

/// base^exponent for a possibly negative exponent. base must be non-zero
/// when exponent < 0.
inline ExactValue pow_exact(const ExactValue& base, int exponent) {
  ExactValue result = 1;
  ExactValue factor = exponent >= 0 ? base : ExactValue(1) / base;
  unsigned e = exponent >= 0 ? static_cast<unsigned>(exponent)
                             : static_cast<unsigned>(-exponent);
  while (e != 0) {
    if (e & 1u) result *= factor;
    e >>= 1u;
    if (e != 0) factor *= factor;
  }
  return result;
}

/// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const ExactValue& v) {
  BigInt num = boost::multiprecision::numerator(v);
  BigInt den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const ExactValue& v) { return v.convert_to<double>(); }

inline ExactValue abs_exact(const ExactValue& v) { return v < 0 ? ExactValue(-v) : v; }

/// Parses "a", "a/b", or a finite decimal such as "0.25" into an exact value.
inline ExactValue parse_exact(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return ExactValue(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return ExactValue(BigInt(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  BigInt den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  if (digits.empty() || digits == "-") throw std::invalid_argument("bad number '" + text + "'");
  return ExactValue(BigInt(digits), den);
}

}  // namespace ptfree
