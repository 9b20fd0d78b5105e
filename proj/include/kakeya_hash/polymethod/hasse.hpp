#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/polymethod/multipoly.hpp"

namespace kakeya_hash {

/// C(a, b) mod p by Lucas' theorem: the product of C(a_i, b_i) over base-p digits.
inline std::uint32_t lucas_binomial(std::uint64_t a, std::uint64_t b, std::uint32_t p) {
  if (b > a) return 0;
  std::uint64_t out = 1;
  while (b > 0 || a > 0) {
    const std::uint64_t ai = a % p;
    const std::uint64_t bi = b % p;
    if (bi > ai) return 0;
    // C(ai, bi) mod p with ai < p: no factor of p, so divide by modular inverse
    std::uint64_t num = 1;
    std::uint64_t den = 1;
    for (std::uint64_t k = 0; k < bi; ++k) {
      num = num * ((ai - k) % p) % p;
      den = den * ((k + 1) % p) % p;
    }
    std::uint64_t inv = 1;
    std::uint64_t base = den;
    for (std::uint64_t e = p - 2; e > 0; e >>= 1U) {
      if (e & 1U) inv = inv * base % p;
      base = base * base % p;
    }
    out = out * (num * inv % p) % p;
    a /= p;
    b /= p;
  }
  return static_cast<std::uint32_t>(out);
}

/// The i-th Hasse derivative: the coefficient of z^i in f(x + z). Termwise x^a -> C(a, i) x^{a-i}
/// with C(a, i) the product of per-variable binomials reduced mod p.
inline MultiPoly hasse_derivative(const MultiPoly& f, const Exponents& i) {
  detail::require(i.size() == f.nvars(), "derivative multi-index has wrong arity");
  const Field& fld = *f.field();
  MultiPoly out(f.field(), f.nvars());
  for (const auto& [a, c] : f.terms()) {
    std::uint64_t coef = 1;
    Exponents rest(a.size());
    for (std::size_t v = 0; v < a.size() && coef != 0; ++v) {
      if (i[v] > a[v]) {
        coef = 0;
        break;
      }
      coef = coef * lucas_binomial(a[v], i[v], fld.p()) % fld.p();
      rest[v] = a[v] - i[v];
    }
    if (coef != 0) out.add_term(std::move(rest), fld.mul(c, fld.from_int(static_cast<std::int64_t>(coef))));
  }
  return out;
}

/// Both sides of (f^{(i)})^{(j)} = f^{(i+j)} prod_k C(i_k + j_k, i_k).
inline std::pair<MultiPoly, MultiPoly> chain_rule_pair(const MultiPoly& f, const Exponents& i, const Exponents& j) {
  detail::require(i.size() == f.nvars() && j.size() == f.nvars(), "multi-index arity mismatch");
  const Field& fld = *f.field();
  MultiPoly lhs = hasse_derivative(hasse_derivative(f, i), j);
  Exponents sum(i.size());
  std::uint64_t coef = 1;
  for (std::size_t k = 0; k < i.size(); ++k) {
    sum[k] = i[k] + j[k];
    coef = coef * lucas_binomial(sum[k], i[k], fld.p()) % fld.p();
  }
  MultiPoly rhs = hasse_derivative(f, sum).scaled(fld.from_int(static_cast<std::int64_t>(coef)));
  return {std::move(lhs), std::move(rhs)};
}

/// Order of vanishing; infinite exactly for the zero polynomial.
class Multiplicity {
 public:
  static Multiplicity infinite() { return Multiplicity(); }
  explicit Multiplicity(std::uint32_t value) : value_(value) {}

  bool is_infinite() const { return !value_.has_value(); }
  std::uint32_t value() const {
    detail::require(value_.has_value(), "infinite multiplicity has no finite value");
    return *value_;
  }

  friend bool operator==(const Multiplicity& a, const Multiplicity& b) { return a.value_ == b.value_; }
  friend bool operator>=(const Multiplicity& a, const Multiplicity& b) {
    if (a.is_infinite()) return true;
    if (b.is_infinite()) return false;
    return *a.value_ >= *b.value_;
  }
  friend Multiplicity operator+(const Multiplicity& a, const Multiplicity& b) {
    if (a.is_infinite() || b.is_infinite()) return infinite();
    return Multiplicity(*a.value_ + *b.value_);
  }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

 private:
  Multiplicity() = default;
  std::optional<std::uint32_t> value_;
};

/// Largest m such that every Hasse derivative of weight below m vanishes at a. Derivatives are
/// tried weight by weight until one is nonzero at a.
inline Multiplicity multiplicity(const MultiPoly& f, std::span<const Elem> a) {
  detail::require(a.size() == f.nvars(), "point has wrong arity");
  if (f.is_zero()) return Multiplicity::infinite();
  const auto deg = static_cast<std::uint32_t>(f.degree());
  for (std::uint32_t w = 0; w <= deg; ++w) {
    for (const auto& j : monomials_of_weight(f.nvars(), w)) {
      if (hasse_derivative(f, j).eval(a) != 0) return Multiplicity(w);
    }
  }
  throw std::logic_error("nonzero polynomial with every derivative vanishing");
}

struct SzAudit {
  std::uint64_t total_mult = 0;
  std::uint64_t bound = 0;  // d |U|^{n-1}
  bool pass = false;
};

/// Sums mult(f, a) over a in U^n and compares with d |U|^{n-1}. d defaults to deg f.
inline SzAudit sz_audit(const MultiPoly& f, const std::vector<Elem>& U, std::optional<std::uint32_t> d = std::nullopt) {
  if (f.is_zero()) throw std::invalid_argument("the multiplicity bound needs a nonzero polynomial");
  detail::require(f.nvars() >= 1, "the multiplicity bound needs at least one variable");
  const auto deg = static_cast<std::uint32_t>(f.degree());
  const std::uint32_t dd = d.value_or(deg);
  detail::require(dd >= deg, "supplied degree bound is below deg f");
  detail::require(!U.empty(), "U must be nonempty");
  SzAudit out;
  const std::size_t n = f.nvars();
  out.bound = dd * checked_pow(U.size(), n - 1);
  std::vector<Elem> idx(n, 0);
  Vec point(n);
  do {
    for (std::size_t i = 0; i < n; ++i) point[i] = U[idx[i]];
    out.total_mult += multiplicity(f, point).value();
  } while (detail::odometer_next(idx, static_cast<std::uint32_t>(U.size())));
  out.pass = out.total_mult <= out.bound;
  return out;
}

struct CompositionAudit {
  Multiplicity lhs = Multiplicity::infinite();  // mult(f o H, a)
  Multiplicity rhs = Multiplicity::infinite();  // mult(f, H(a))
  bool pass = false;
};

inline CompositionAudit mult_composition_audit(const MultiPoly& f, const std::vector<MultiPoly>& H,
                                               std::span<const Elem> a) {
  detail::require(H.size() == f.nvars(), "H must supply one polynomial per variable of f");
  for (const auto& h : H) detail::require(h.nvars() == a.size(), "H's arity does not match the point");
  Vec ha;
  for (const auto& h : H) ha.push_back(h.eval(a));
  CompositionAudit out;
  out.lhs = multiplicity(f.substitute(H), a);
  out.rhs = multiplicity(f, ha);
  out.pass = out.lhs >= out.rhs;
  return out;
}

}  // namespace kakeya_hash
