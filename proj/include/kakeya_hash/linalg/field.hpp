#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kakeya_hash/core/error.hpp"

namespace kakeya_hash {

/// A field element as stored in matrices and vectors: the base-p digits of its coefficient vector,
/// digit i holding the coefficient of x^i in the polynomial basis. Zero is 0, one is 1.
using Elem = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// The finite field F_q, q = p^ell. Extension fields use the lexicographically smallest monic
/// irreducible of degree ell over F_p (remaining coefficients read high-degree-first as base-p
/// digits), so the same (p, ell) always yields bit-identical arithmetic.
///
/// Multiplication in extensions goes through discrete log tables of size q; q is capped at 2^20.
class Field {
 public:
  static constexpr std::uint64_t kMaxOrder = 1ULL << 20U;

  static FieldPtr make(std::uint32_t p, std::uint32_t ell = 1) {
    return std::shared_ptr<const Field>(new Field(p, ell));
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t ell() const { return ell_; }
  std::uint32_t q() const { return q_; }
  bool is_prime_field() const { return ell_ == 1; }

  /// Monic modulus, coefficients low degree first (length ell + 1). Empty for prime fields.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  /// Image of the integer k under Z -> F_p -> F_q.
  Elem from_int(std::int64_t k) const {
    const auto pp = static_cast<std::int64_t>(p_);
    return static_cast<Elem>(((k % pp) + pp) % pp);
  }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (ell_ == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) + b) % p_);
    Elem out = 0;
    Elem place = 1;
    for (std::uint32_t i = 0; i < ell_; ++i) {
      out += ((a % p_ + b % p_) % p_) * place;
      a /= p_;
      b /= p_;
      place *= p_;
    }
    return out;
  }

  Elem neg(Elem a) const {
    if (p_ == 2) return a;
    if (ell_ == 1) return a == 0 ? 0 : p_ - a;
    Elem out = 0;
    Elem place = 1;
    for (std::uint32_t i = 0; i < ell_; ++i) {
      out += ((p_ - a % p_) % p_) * place;
      a /= p_;
      place *= p_;
    }
    return out;
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (ell_ == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p_);
    if (a == 0 || b == 0) return 0;
    std::uint32_t e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }

  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("division by zero in F_" + std::to_string(q_));
    if (ell_ == 1) return pow(a, p_ - 2);
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem result = 1;
    while (e > 0) {
      if (e & 1U) result = mul(result, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return result;
  }

  /// Coefficient vector of a, low degree first, length ell.
  std::vector<std::uint32_t> digits(Elem a) const {
    std::vector<std::uint32_t> out(ell_);
    for (auto& d : out) {
      d = a % p_;
      a /= p_;
    }
    return out;
  }

  Elem from_digits(const std::vector<std::uint32_t>& d) const {
    detail::require(d.size() <= ell_, "too many digits for F_" + std::to_string(q_));
    Elem out = 0;
    for (std::size_t i = d.size(); i-- > 0;) {
      detail::require(d[i] < p_, "digit out of range");
      out = out * p_ + d[i];
    }
    return out;
  }

  std::string name() const { return "F_" + std::to_string(q_); }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

  /// Polynomials over F_p as coefficient vectors, low degree first, no trailing zeros.
  using Poly = std::vector<std::uint32_t>;

  /// Remainder of a modulo the monic polynomial m over F_p.
  static Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
      const std::uint32_t lead = a.back();
      if (lead != 0) {
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) {
          a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + static_cast<std::uint64_t>(p - lead) * m[i]) % p);
        }
      }
      a.pop_back();
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
  }

  /// Trial division by every monic polynomial of degree 1..deg/2.
  static bool is_irreducible(const Poly& f, std::uint32_t p) {
    const std::size_t deg = f.size() - 1;
    if (deg == 0) return false;
    for (std::size_t dd = 1; dd <= deg / 2; ++dd) {
      std::uint64_t count = 1;
      for (std::size_t i = 0; i < dd; ++i) count *= p;
      for (std::uint64_t v = 0; v < count; ++v) {
        Poly g(dd + 1);
        std::uint64_t x = v;
        for (std::size_t i = 0; i < dd; ++i) {
          g[i] = static_cast<std::uint32_t>(x % p);
          x /= p;
        }
        g[dd] = 1;
        if (poly_mod(f, g, p).empty()) return false;
      }
    }
    return true;
  }

 private:
  Field(std::uint32_t p, std::uint32_t ell) : p_(p), ell_(ell) {
    detail::require(is_prime(p), "field characteristic must be prime, got " + std::to_string(p));
    detail::require(ell >= 1, "extension degree must be at least 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < ell; ++i) {
      q *= p;
      detail::require(q <= kMaxOrder, "field order exceeds the supported 2^20");
    }
    q_ = static_cast<std::uint32_t>(q);
    if (ell_ > 1) {
      find_modulus();
      build_log_tables();
    }
  }

  void find_modulus() {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < ell_; ++i) count *= p_;
    for (std::uint64_t v = 0; v < count; ++v) {
      Poly f(ell_ + 1);
      std::uint64_t x = v;
      for (std::uint32_t i = 0; i < ell_; ++i) {
        f[i] = static_cast<std::uint32_t>(x % p_);
        x /= p_;
      }
      f[ell_] = 1;
      if (is_irreducible(f, p_)) {
        modulus_ = f;
        return;
      }
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable for prime p
  }

  Elem slow_mul(Elem a, Elem b) const {
    const auto da = digits(a);
    const auto db = digits(b);
    Poly prod(2 * ell_ - 1, 0);
    for (std::uint32_t i = 0; i < ell_; ++i) {
      for (std::uint32_t j = 0; j < ell_; ++j) {
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
      }
    }
    return from_digits(poly_mod(prod, modulus_, p_));
  }

  void build_log_tables() {
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    for (Elem g = 2; g < q_; ++g) {
      Elem x = 1;
      std::uint32_t order = 0;
      do {
        exp_[order] = x;
        x = slow_mul(x, g);
        ++order;
      } while (x != 1 && order < q_ - 1);
      if (x == 1 && order == q_ - 1) {
        for (std::uint32_t e = 0; e < q_ - 1; ++e) log_[exp_[e]] = e;
        return;
      }
    }
    throw std::logic_error("no primitive element found");  // unreachable
  }

  std::uint32_t p_;
  std::uint32_t ell_;
  std::uint32_t q_ = 0;
  Poly modulus_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
};

/// A field element bundled with its field, for code that wants operator syntax and context checks.
/// Hot loops work on raw Elem values through the Field directly.
class FieldElem {
 public:
  FieldElem(FieldPtr field, Elem value) : field_(std::move(field)), value_(value) {
    detail::require(field_ != nullptr, "null field");
    detail::require(value_ < field_->q(), "element out of range for " + field_->name());
  }

  const FieldPtr& field() const { return field_; }
  Elem value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->add(a.value_, b.value_)};
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->sub(a.value_, b.value_)};
  }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->mul(a.value_, b.value_)};
  }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_->div(a.value_, b.value_)};
  }
  FieldElem operator-() const { return {field_, field_->neg(value_)}; }
  FieldElem inverse() const { return {field_, field_->inv(value_)}; }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.value_ == b.value_ && same_field(a, b);
  }

 private:
  static bool same_field(const FieldElem& a, const FieldElem& b) {
    return a.field_ == b.field_ || (a.field_->p() == b.field_->p() && a.field_->ell() == b.field_->ell());
  }
  static void check_same(const FieldElem& a, const FieldElem& b) {
    if (!same_field(a, b)) {
      throw std::invalid_argument("mismatched fields: " + a.field_->name() + " vs " + b.field_->name());
    }
  }

  FieldPtr field_;
  Elem value_;
};

}  // namespace kakeya_hash
