#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rng.hpp"
#include "kakeya_hash/linalg/field.hpp"
#include "kakeya_hash/linalg/matrix.hpp"

namespace kakeya_hash {

using Exponents = std::vector<std::uint32_t>;

inline std::uint32_t weight(const Exponents& e) {
  std::uint32_t w = 0;
  for (auto x : e) w += x;
  return w;
}

/// A polynomial in nvars variables over F_q, stored sparsely; zero coefficients are never kept.
class MultiPoly {
 public:
  /// degree() of the zero polynomial.
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  MultiPoly(FieldPtr field, std::size_t nvars) : field_(std::move(field)), nvars_(nvars) {
    detail::require(field_ != nullptr, "null field");
  }

  static MultiPoly constant(FieldPtr field, std::size_t nvars, Elem c) {
    MultiPoly p(std::move(field), nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
  }

  static MultiPoly monomial(FieldPtr field, Exponents exps, Elem c = 1) {
    MultiPoly p(std::move(field), exps.size());
    p.add_term(std::move(exps), c);
    return p;
  }

  static MultiPoly variable(FieldPtr field, std::size_t nvars, std::size_t i) {
    detail::require(i < nvars, "variable index out of range");
    Exponents e(nvars, 0);
    e[i] = 1;
    return monomial(std::move(field), std::move(e));
  }

  /// Coefficients of every monomial of degree <= d drawn uniformly (so the degree may come out lower).
  static MultiPoly random(CounterRng& rng, FieldPtr field, std::size_t nvars, std::uint32_t d) {
    MultiPoly p(field, nvars);
    Exponents e(nvars, 0);
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
      if (i == nvars) {
        p.add_term(e, static_cast<Elem>(rng.below(field->q())));
        return;
      }
      for (std::uint32_t a = 0; a <= left; ++a) {
        e[i] = a;
        self(self, i + 1, left - a);
      }
      e[i] = 0;
    };
    rec(rec, 0, d);
    return p;
  }

  const FieldPtr& field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  const std::map<Exponents, Elem>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = kZeroDegree;
    for (const auto& [e, _] : terms_) d = std::max(d, static_cast<int>(weight(e)));
    return d;
  }

  Elem coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Adds c x^e.
  void add_term(Exponents e, Elem c) {
    detail::require(e.size() == nvars_, "exponent vector has wrong arity");
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(std::move(e), c);
    if (!fresh) {
      it->second = field_->add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    check(a, b);
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
  }

  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    check(a, b);
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, a.field_->neg(c));
    return out;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    check(a, b);
    const Field& f = *a.field_;
    MultiPoly out(a.field_, a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.nvars_);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(std::move(e), f.mul(ca, cb));
      }
    }
    return out;
  }

  MultiPoly scaled(Elem s) const {
    MultiPoly out(field_, nvars_);
    for (const auto& [e, c] : terms_) out.add_term(e, field_->mul(s, c));
    return out;
  }

  MultiPoly pow(std::uint32_t k) const {
    MultiPoly out = constant(field_, nvars_, 1);
    for (std::uint32_t i = 0; i < k; ++i) out = out * *this;
    return out;
  }

  Elem eval(std::span<const Elem> point) const {
    detail::require(point.size() == nvars_, "evaluation point has wrong arity");
    const Field& f = *field_;
    Elem acc = 0;
    for (const auto& [e, c] : terms_) {
      Elem term = c;
      for (std::size_t i = 0; i < nvars_ && term != 0; ++i) {
        if (e[i] != 0) term = f.mul(term, f.pow(point[i], e[i]));
      }
      acc = f.add(acc, term);
    }
    return acc;
  }

  /// f(H_1, ..., H_nvars): variable i replaced by images[i], all polynomials in a common set of variables.
  MultiPoly substitute(const std::vector<MultiPoly>& images) const {
    detail::require(images.size() == nvars_, "substitution needs one image per variable");
    const std::size_t out_vars = images.empty() ? 0 : images.front().nvars();
    for (const auto& h : images) {
      detail::require(h.nvars() == out_vars, "substituted polynomials disagree on arity");
      detail::require(h.field_->q() == field_->q(), "substituted polynomial over another field");
    }
    // powers of each image, built on demand
    std::vector<std::vector<MultiPoly>> powers(nvars_);
    auto power = [&](std::size_t i, std::uint32_t k) -> const MultiPoly& {
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(constant(field_, out_vars, 1));
      while (pw.size() <= k) pw.push_back(pw.back() * images[i]);
      return pw[k];
    };
    MultiPoly out(field_, out_vars);
    for (const auto& [e, c] : terms_) {
      MultiPoly term = constant(field_, out_vars, c);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i] != 0) term = term * power(i, e[i]);
      out = out + term;
    }
    return out;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.field_->q() == b.field_->q() && a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      os << it->second;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (it->first[i] == 0) continue;
        os << "*x" << i + 1;
        if (it->first[i] > 1) os << "^" << it->first[i];
      }
    }
    return os.str();
  }

 private:
  static void check(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomials in different numbers of variables");
    if (a.field_->q() != b.field_->q() || a.field_->p() != b.field_->p())
      throw std::invalid_argument("polynomials over different fields");
  }

  FieldPtr field_;
  std::size_t nvars_;
  std::map<Exponents, Elem> terms_;
};

/// The point a + z as polynomials in z: x_i -> a_i + z_i.
inline std::vector<MultiPoly> translation(const FieldPtr& field, std::span<const Elem> a) {
  std::vector<MultiPoly> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back(MultiPoly::variable(field, a.size(), i) + MultiPoly::constant(field, a.size(), a[i]));
  return out;
}

/// Every exponent vector in n variables of total degree at most d, in graded-lexicographic order:
/// degree ascending, and within a degree exponent vectors in descending lexicographic order
/// (x1^d first). For n = 2, d = 1: 1, x1, x2.
inline std::vector<Exponents> monomials_up_to(std::size_t n, std::uint32_t d) {
  std::vector<Exponents> out;
  for (std::uint32_t w = 0; w <= d; ++w) {
    Exponents e(n, 0);
    auto rec = [&](auto&& self, std::size_t i, std::uint32_t left) -> void {
      if (n == 0) {
        if (left == 0) out.push_back(e);
        return;
      }
      if (i == n - 1) {
        e[i] = left;
        out.push_back(e);
        e[i] = 0;
        return;
      }
      for (std::uint32_t a = left + 1; a-- > 0;) {
        e[i] = a;
        self(self, i + 1, left - a);
      }
      e[i] = 0;
    };
    rec(rec, 0, w);
  }
  return out;
}

/// Every exponent vector of total degree exactly w, in the same order as monomials_up_to.
inline std::vector<Exponents> monomials_of_weight(std::size_t n, std::uint32_t w) {
  std::vector<Exponents> out;
  for (auto& e : monomials_up_to(n, w))
    if (weight(e) == w) out.push_back(std::move(e));
  return out;
}

}  // namespace kakeya_hash
