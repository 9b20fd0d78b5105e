#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rational.hpp"
#include "kakeya_hash/hashcore/point_set.hpp"
#include "kakeya_hash/linalg/subspace.hpp"

namespace kakeya_hash {

inline constexpr std::uint64_t kDefaultBudget = 100000000;  // flat-point incidence checks
inline constexpr std::size_t kDefaultWitnessCap = 16;

/// E_k(S) = |S| / q^{n-k}: the mean of |R cap S| over k-flats R.
inline Rational expected_intersection(const PointSet& S, std::size_t k) {
  detail::require(k <= S.dim(), "flat dimension k exceeds n");
  return make_rational(BigInt(S.size()), pow_big(BigInt(S.field()->q()), S.dim() - k));
}

inline std::uint64_t intersection_count(const Flat& R, const PointSet& S) {
  detail::require(R.ambient_dim() == S.dim(), "flat and set live in different dimensions");
  std::uint64_t c = 0;
  for (const auto& x : S)
    if (R.contains(x)) ++c;
  return c;
}

namespace detail {

/// ||R cap S| - E_k| <= tau E_k, multiplied through by q^{n-k}: |c q^{n-k} - |S|| <= tau |S|.
inline bool balanced_count(std::uint64_t c, const BigInt& codim_size, std::uint64_t set_size, const Rational& tau) {
  BigInt dev = BigInt(c) * codim_size - BigInt(set_size);
  if (dev < 0) dev = -dev;
  return Rational(dev) <= tau * Rational(BigInt(set_size));
}

/// |R cap S| for every canonical shift R of A that meets S, keyed by encode(shift).
inline std::map<std::uint64_t, std::uint64_t> shift_counts(const Subspace& A, const PointSet& S) {
  std::map<std::uint64_t, std::uint64_t> counts;
  const std::uint32_t q = S.field()->q();
  for (const auto& x : S) ++counts[encode(A.reduce(x), q)];
  return counts;
}

inline void check_tau(const Rational& tau) { require(tau >= 0, "tau must be nonnegative"); }

}  // namespace detail

/// Whether the flat R is tau-balanced with respect to S (inclusive). With S empty, E_k = 0 and
/// every flat counts as balanced.
inline bool is_balanced(const Flat& R, const PointSet& S, const Rational& tau) {
  detail::check_tau(tau);
  const BigInt codim = pow_big(BigInt(S.field()->q()), S.dim() - R.dim());
  return detail::balanced_count(intersection_count(R, S), codim, S.size(), tau);
}

struct ShiftBalance {
  bool balanced = true;
  std::optional<Vec> first_violation;  // canonical shift, smallest in encode() order
};

/// Whether every translate of A is tau-balanced with respect to S.
inline ShiftBalance is_shift_balanced(const Subspace& A, const PointSet& S, const Rational& tau) {
  detail::check_tau(tau);
  detail::require(A.ambient_dim() == S.dim(), "subspace and set live in different dimensions");
  const std::uint32_t q = S.field()->q();
  checked_pow(q, S.dim());
  const BigInt codim = pow_big(BigInt(q), S.dim() - A.dim());
  const auto counts = detail::shift_counts(A, S);

  std::optional<std::uint64_t> worst;
  for (const auto& [key, c] : counts) {
    if (!detail::balanced_count(c, codim, S.size(), tau)) {
      worst = key;
      break;  // keys ascend
    }
  }
  // shifts missing S hold 0 points
  if (BigInt(counts.size()) < codim && !detail::balanced_count(0, codim, S.size(), tau)) {
    for_each_shift(A, [&](const Vec& shift) {
      const std::uint64_t key = encode(shift, q);
      if (worst && key >= *worst) return false;
      if (!counts.contains(key)) {
        worst = key;
        return false;
      }
      return true;
    });
  }
  if (!worst) return {true, std::nullopt};
  return {false, decode(*worst, S.dim(), q)};
}

struct BalanceWitness {
  Subspace subspace;
  Vec shift;
};

struct BalanceReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint32_t q = 0;
  Rational tau;
  BigInt total_subspaces;
  BigInt shift_balanced_count;
  Rational fraction;
  std::vector<BalanceWitness> witnesses;  // unbalanced (direction, first violating shift), capped
};

namespace detail {

/// Work estimate for sweeping every k-dimensional direction: each costs q^{n-k} shifts plus |S| reductions.
inline void check_sweep_budget(const FieldPtr& field, std::size_t n, std::size_t k, std::uint64_t set_size,
                               std::uint64_t budget) {
  const BigInt work = gaussian_binomial(n, k, field->q()) * (pow_big(BigInt(field->q()), n - k) + set_size);
  if (work > budget) {
    throw BudgetExceeded("enumerating all " + std::to_string(k) + "-flats of F_" + std::to_string(field->q()) + "^" +
                         std::to_string(n) + " needs about " + work.str() + " incidence checks, budget is " +
                         std::to_string(budget));
  }
}

}  // namespace detail

/// Exhaustive count of the k-dimensional subspaces that are tau-shift-balanced with respect to S.
inline BalanceReport shift_balanced_fraction(const PointSet& S, std::size_t k, const Rational& tau,
                                             std::uint64_t budget = kDefaultBudget,
                                             std::size_t witness_cap = kDefaultWitnessCap) {
  detail::check_tau(tau);
  detail::require(k <= S.dim(), "flat dimension k exceeds n");
  detail::check_sweep_budget(S.field(), S.dim(), k, S.size(), budget);
  BalanceReport rep;
  rep.n = S.dim();
  rep.k = k;
  rep.q = S.field()->q();
  rep.tau = tau;
  for_each_subspace(S.field(), S.dim(), k, [&](const Subspace& A) {
    ++rep.total_subspaces;
    const auto res = is_shift_balanced(A, S, tau);
    if (res.balanced) {
      ++rep.shift_balanced_count;
    } else if (rep.witnesses.size() < witness_cap) {
      rep.witnesses.push_back({A, *res.first_violation});
    }
  });
  rep.fraction = make_rational(rep.shift_balanced_count, rep.total_subspaces);
  return rep;
}

/// Result of auditing one instance of a concentration-type bound.
struct ClaimAudit {
  Rational fraction;       // the measured fraction
  BigInt flats_counted;    // denominator of `fraction`
  Rational expected;       // E_{k-2}(S)
  bool hypothesis_holds = false;  // E_{k-2}(S) >= q
  /// The bound in terms of q; asserted only when the hypothesis holds. Absent means vacuous
  /// (infinite for an upper bound).
  std::optional<Rational> bound;
  /// The same bound with q replaced by E_{k-2}(S), valid for every instance with E_{k-2}(S) > 0 and
  /// at least as strong as `bound` whenever the hypothesis holds. Absent means vacuous.
  std::optional<Rational> general_bound;
  bool pass = false;
};

/// Fraction of (k-2)-flats R that are sigma-unbalanced with respect to S, checked against
/// 1/(sigma^2 q) (when E_{k-2} >= q) and against 1/(sigma^2 E_{k-2}).
inline ClaimAudit audit_claim_concentration(const PointSet& S, std::size_t k, const Rational& sigma,
                                            std::uint64_t budget = kDefaultBudget) {
  detail::require(k >= 3, "the concentration audit needs k >= 3");
  detail::require(k <= S.dim(), "flat dimension k exceeds n");
  detail::require(sigma >= 0, "sigma must be nonnegative");
  const std::size_t j = k - 2;
  const std::uint32_t q = S.field()->q();
  detail::check_sweep_budget(S.field(), S.dim(), j, S.size(), budget);
  const BigInt codim = pow_big(BigInt(q), S.dim() - j);

  BigInt unbalanced = 0;
  BigInt total = 0;
  const bool zero_unbalanced = !detail::balanced_count(0, codim, S.size(), sigma);
  for_each_subspace(S.field(), S.dim(), j, [&](const Subspace& A) {
    const auto counts = detail::shift_counts(A, S);
    for (const auto& [_, c] : counts)
      if (!detail::balanced_count(c, codim, S.size(), sigma)) ++unbalanced;
    if (zero_unbalanced) unbalanced += codim - counts.size();
    total += codim;
  });

  ClaimAudit out;
  out.flats_counted = total;
  out.fraction = make_rational(unbalanced, total);
  out.expected = expected_intersection(S, j);
  out.hypothesis_holds = out.expected >= q;
  if (sigma > 0) {
    out.bound = Rational(1) / (sigma * sigma * q);
    if (out.expected > 0) out.general_bound = Rational(1) / (sigma * sigma * out.expected);
  }
  out.pass = (!out.general_bound || out.fraction <= *out.general_bound) &&
             (!out.hypothesis_holds || !out.bound || out.fraction <= *out.bound);
  return out;
}

/// For a k-flat T that is tau-unbalanced with respect to S: the fraction of (k-2)-flats inside T
/// that are sigma-unbalanced, checked against 1 - (1+tau)/((tau-sigma)^2 q) (when E_{k-2} >= q) and
/// 1 - (1+tau)/((tau-sigma)^2 E_{k-2}).
inline ClaimAudit audit_claim_anticoncentration(const Flat& T, const PointSet& S, const Rational& tau,
                                                const Rational& sigma) {
  detail::require(T.ambient_dim() == S.dim(), "flat and set live in different dimensions");
  detail::require(T.dim() >= 2, "the anti-concentration audit needs k >= 2");
  detail::require(sigma >= 0, "sigma must be nonnegative");
  if (sigma >= tau) throw std::invalid_argument("sigma must be below tau (the bound divides by tau - sigma)");
  if (is_balanced(T, S, tau)) throw std::invalid_argument("T is tau-balanced with respect to S; the audit needs it unbalanced");

  const FieldPtr& field = S.field();
  const std::uint32_t q = field->q();
  const std::size_t k = T.dim();
  const std::size_t j = k - 2;
  const BigInt codim = pow_big(BigInt(q), S.dim() - j);

  // S cap T in the coordinates of T's basis; the basis is in reduced echelon form, so the
  // coefficient on basis row i is the pivot-i entry of x - shift.
  std::vector<Vec> coords;
  const Field& f = *field;
  for (const auto& x : S) {
    if (!T.contains(x)) continue;
    const Vec d = vec_sub(f, x, T.shift());
    Vec c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = d[T.subspace().pivots()[i]];
    coords.push_back(std::move(c));
  }
  const PointSet inside(field, k, std::move(coords));

  BigInt unbalanced = 0;
  BigInt total = 0;
  const BigInt inner_codim = pow_big(BigInt(q), 2);
  const bool zero_unbalanced = !detail::balanced_count(0, codim, S.size(), sigma);
  for_each_subspace(field, k, j, [&](const Subspace& A) {
    const auto counts = detail::shift_counts(A, inside);
    for (const auto& [_, c] : counts)
      if (!detail::balanced_count(c, codim, S.size(), sigma)) ++unbalanced;
    if (zero_unbalanced) unbalanced += inner_codim - counts.size();
    total += inner_codim;
  });

  ClaimAudit out;
  out.flats_counted = total;
  out.fraction = make_rational(unbalanced, total);
  out.expected = expected_intersection(S, j);
  out.hypothesis_holds = out.expected >= q;
  const Rational gap = (tau - sigma) * (tau - sigma);
  out.bound = 1 - (1 + tau) / (gap * q);
  if (out.expected > 0) out.general_bound = 1 - (1 + tau) / (gap * out.expected);
  out.pass = (!out.general_bound || out.fraction >= *out.general_bound) &&
             (!out.hypothesis_holds || out.fraction >= *out.bound);
  return out;
}

}  // namespace kakeya_hash
