#pragma once

#include <cmath>
#include <cstdint>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rational.hpp"

namespace kakeya_hash {

/// Exact element a + b*sqrt(r) of Q(sqrt(r)) for a fixed rational radicand r >= 0. Used to evaluate
/// thresholds involving sqrt(tau) without floating point: every comparison reduces to a sign test.
class QuadSurd {
 public:
  QuadSurd(Rational a, Rational b, Rational radicand) : a_(std::move(a)), b_(std::move(b)), r_(std::move(radicand)) {
    detail::require(r_ >= 0, "negative radicand");
  }

  /// The rational x viewed in Q(sqrt(r)).
  static QuadSurd rational(Rational x, Rational radicand) { return {std::move(x), 0, std::move(radicand)}; }
  /// sqrt(r) itself.
  static QuadSurd root(Rational radicand) { return {0, 1, std::move(radicand)}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& radicand() const { return r_; }

  friend QuadSurd operator+(const QuadSurd& x, const QuadSurd& y) {
    check(x, y);
    return {x.a_ + y.a_, x.b_ + y.b_, x.r_};
  }
  friend QuadSurd operator-(const QuadSurd& x, const QuadSurd& y) {
    check(x, y);
    return {x.a_ - y.a_, x.b_ - y.b_, x.r_};
  }
  friend QuadSurd operator*(const QuadSurd& x, const QuadSurd& y) {
    check(x, y);
    return {x.a_ * y.a_ + x.b_ * y.b_ * x.r_, x.a_ * y.b_ + x.b_ * y.a_, x.r_};
  }
  friend QuadSurd operator*(const Rational& s, const QuadSurd& x) { return {s * x.a_, s * x.b_, x.r_}; }
  friend QuadSurd operator/(const QuadSurd& x, const QuadSurd& y) {
    check(x, y);
    // multiply through by the conjugate of y
    const Rational norm = y.a_ * y.a_ - y.b_ * y.b_ * y.r_;
    if (norm == 0) {
      // y = b sqrt(r) with r a perfect square or y = 0; fall back to the rational value of y
      const Rational yv = y.a_ + y.b_ * exact_sqrt(y.r_);
      if (yv == 0) throw std::domain_error("division by zero in Q(sqrt r)");
      return {x.a_ / yv, x.b_ / yv, x.r_};
    }
    const QuadSurd conj{y.a_, -y.b_, y.r_};
    const QuadSurd top = x * conj;
    return {top.a_ / norm, top.b_ / norm, x.r_};
  }

  QuadSurd pow(unsigned e) const {
    QuadSurd out = rational(1, r_);
    for (unsigned i = 0; i < e; ++i) out = out * *this;
    return out;
  }

  /// -1, 0 or 1, exactly.
  int sign() const {
    const int sa = a_ > 0 ? 1 : (a_ < 0 ? -1 : 0);
    const int sb = (b_ == 0 || r_ == 0) ? 0 : (b_ > 0 ? 1 : -1);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    const Rational lhs = a_ * a_;
    const Rational rhs = b_ * b_ * r_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
  }

  friend bool operator<(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() < 0; }
  friend bool operator<=(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() <= 0; }
  friend bool operator>(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() > 0; }
  friend bool operator>=(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() >= 0; }
  friend bool operator==(const QuadSurd& x, const QuadSurd& y) { return (x - y).sign() == 0; }

  double to_double() const {
    return static_cast<double>(a_) + static_cast<double>(b_) * std::sqrt(static_cast<double>(r_));
  }

  /// Smallest integer e >= 0 with 2^e >= this.
  std::int64_t ceil_log2() const {
    if (*this <= rational(1, r_)) return 0;
    const double approx = std::log2(to_double());
    std::int64_t e = approx > 2 ? static_cast<std::int64_t>(approx) - 2 : 0;
    while (rational(pow_rat(2, e), r_) < *this) ++e;
    while (e > 0 && rational(pow_rat(2, e - 1), r_) >= *this) --e;
    return e;
  }

 private:
  static void check(const QuadSurd& x, const QuadSurd& y) {
    if (x.r_ != y.r_) throw std::invalid_argument("surds over different radicands");
  }

  static Rational exact_sqrt(const Rational& r) {
    const BigInt n = boost::multiprecision::sqrt(numerator(r));
    const BigInt d = boost::multiprecision::sqrt(denominator(r));
    if (n * n != numerator(r) || d * d != denominator(r)) throw std::domain_error("radicand is not a perfect square");
    return Rational(n, d);
  }

  Rational a_;
  Rational b_;
  Rational r_;
};

}  // namespace kakeya_hash
