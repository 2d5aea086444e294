#ifndef QUASIPERM_RATIONAL_HPP
#define QUASIPERM_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "quasiperm/error.hpp"

namespace quasiperm {

using Integer = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator. All arithmetic in the library is exact; doubles appear only
/// in clearly marked heuristics.
using Rational = boost::multiprecision::cpp_rational;

inline Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

inline Integer int_pow(Integer base, unsigned exp) {
  Integer r = 1;
  while (exp--) r *= base;
  return r;
}

inline Rational rational_pow(const Rational& base, unsigned exp) {
  Rational r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Renders "p/q" in lowest terms, or just "p" for integers.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
inline Rational parse_rational(std::string_view text) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text.empty()) fail(errc::parse_error, "empty rational literal");

  auto parse_int = [](std::string_view s) -> Integer {
    if (s.empty()) fail(errc::parse_error, "empty integer in rational literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) fail(errc::parse_error, "sign without digits in rational literal");
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9')
        fail(errc::parse_error, "invalid character in rational literal: '" + std::string(s) + "'");
    return Integer(std::string(s));
  };

  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) fail(errc::parse_error, "zero denominator in rational literal: '" + std::string(text) + "'");
  return Rational(num, den);
}

inline double approx(const Rational& r) { return static_cast<double>(r); }

} // namespace quasiperm

#endif
