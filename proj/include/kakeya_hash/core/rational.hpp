#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kakeya_hash {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(num, den);
}

/// Renders as "num/den" in lowest terms; the denominator is always written, even when it is 1.
inline std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "num/den", "num", or "-num/den". Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> BigInt {
    if (s.empty()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    for (std::size_t j = i; j < s.size(); ++j) {
      if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    }
    BigInt v(std::string(s.substr(i)));
    return s[0] == '-' ? BigInt(-v) : v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("malformed rational: zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

inline BigInt pow_big(const BigInt& base, std::uint64_t exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp > 0) {
    if (exp & 1U) result *= b;
    exp >>= 1U;
    if (exp > 0) b *= b;
  }
  return result;
}

inline Rational pow_rat(const Rational& base, std::int64_t exp) {
  if (exp < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return Rational(1) / pow_rat(base, -exp);
  }
  return Rational(pow_big(numerator(base), static_cast<std::uint64_t>(exp)),
                  pow_big(denominator(base), static_cast<std::uint64_t>(exp)));
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Smallest integer e >= 0 with 2^e >= x. Exact; x <= 1 gives 0.
inline std::int64_t ceil_log2(const Rational& x) {
  if (x <= 1) return 0;
  const BigInt num = numerator(x);
  const BigInt den = denominator(x);
  // 2^e >= num/den  <=>  den << e >= num
  std::int64_t e = static_cast<std::int64_t>(boost::multiprecision::msb(num)) -
                   static_cast<std::int64_t>(boost::multiprecision::msb(den)) - 1;
  if (e < 0) e = 0;
  while ((den << static_cast<unsigned>(e)) < num) ++e;
  while (e > 0 && (den << static_cast<unsigned>(e - 1)) >= num) --e;
  return e;
}

/// Largest integer e with 2^e <= x, for x >= 1.
inline std::int64_t floor_log2(const Rational& x) {
  if (x < 1) throw std::domain_error("floor_log2 needs x >= 1");
  const BigInt num = numerator(x);
  const BigInt den = denominator(x);
  std::int64_t e = static_cast<std::int64_t>(boost::multiprecision::msb(num)) -
                   static_cast<std::int64_t>(boost::multiprecision::msb(den));
  if (e < 0) e = 0;
  while ((den << static_cast<unsigned>(e)) > num) --e;
  while ((den << static_cast<unsigned>(e + 1)) <= num) ++e;
  return e;
}

inline BigInt ceil(const Rational& r) {
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  BigInt q = num / den;  // truncates toward zero
  if (q * den != num && num > 0) ++q;
  return q;
}

/// Lossy, for human-readable reports only.
inline double to_double(const Rational& r) { return static_cast<double>(r); }

/// log2 of a positive integer, approximately; safe for values beyond double range.
inline double log2_approx(const BigInt& x) {
  if (x <= 0) throw std::domain_error("log2 of a nonpositive integer");
  const unsigned top = boost::multiprecision::msb(x);
  if (top < 60) return std::log2(static_cast<double>(x));
  const BigInt head = x >> (top - 52);
  return static_cast<double>(top - 52) + std::log2(static_cast<double>(head));
}

}  // namespace kakeya_hash
