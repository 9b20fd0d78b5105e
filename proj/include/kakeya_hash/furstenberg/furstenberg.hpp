#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kakeya_hash/balance/balance.hpp"
#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rational.hpp"
#include "kakeya_hash/core/rng.hpp"
#include "kakeya_hash/hashcore/point_set.hpp"
#include "kakeya_hash/linalg/subspace.hpp"

namespace kakeya_hash {

/// Parameters (k, m, beta) of a Furstenberg-set query; gamma is kept when m was derived as ceil(gamma q^k).
struct FurstenbergQuery {
  std::size_t k = 1;
  std::uint64_t m = 0;
  Rational beta = 1;
  std::optional<Rational> gamma;

  static FurstenbergQuery from_gamma(std::uint32_t q, std::size_t k, const Rational& gamma, const Rational& beta) {
    detail::require(gamma >= 0 && gamma <= 1, "gamma must lie in [0, 1]");
    FurstenbergQuery out{k, 0, beta, gamma};
    out.m = static_cast<std::uint64_t>(ceil(gamma * Rational(pow_big(BigInt(q), k))));
    out.validate(q);
    return out;
  }

  void validate(std::uint32_t q) const {
    detail::require(beta >= 0 && beta <= 1, "beta must lie in [0, 1]");
    if (gamma) {
      detail::require(*gamma >= 0 && *gamma <= 1, "gamma must lie in [0, 1]");
      detail::require(BigInt(m) == ceil(*gamma * Rational(pow_big(BigInt(q), k))), "m disagrees with ceil(gamma q^k)");
    }
  }
};

inline bool is_rich(const Flat& R, const PointSet& K, std::uint64_t m) { return intersection_count(R, K) >= m; }

/// Fraction of k-dimensional directions A that have an m-rich translate; the largest beta for which
/// K is (k, m, beta)-Furstenberg. The denominator is the number of k-dimensional subspaces.
inline Rational rich_direction_fraction(const PointSet& K, std::size_t k, std::uint64_t m,
                                        std::uint64_t budget = kDefaultBudget) {
  detail::require(k <= K.dim(), "flat dimension k exceeds n");
  detail::check_sweep_budget(K.field(), K.dim(), k, K.size(), budget);
  BigInt rich = 0;
  BigInt total = 0;
  for_each_subspace(K.field(), K.dim(), k, [&](const Subspace& A) {
    ++total;
    if (m == 0) {
      ++rich;
      return;
    }
    for (const auto& [_, c] : detail::shift_counts(A, K)) {
      if (c >= m) {
        ++rich;
        return;
      }
    }
  });
  return make_rational(rich, total);
}

inline bool is_furstenberg(const PointSet& K, const FurstenbergQuery& query, std::uint64_t budget = kDefaultBudget) {
  query.validate(K.field()->q());
  if (query.beta == 0) return true;
  return rich_direction_fraction(K, query.k, query.m, budget) >= query.beta;
}

/// beta gamma^n q^n (1 + q^{-(k-1)})^{-n}: the size every (k, gamma q^k, beta)-Furstenberg set in
/// F_q^n must reach.
inline Rational lower_bound(std::size_t n, std::uint32_t q, std::size_t k, const Rational& gamma, const Rational& beta) {
  detail::require(gamma >= 0 && gamma <= 1, "gamma must lie in [0, 1]");
  detail::require(beta >= 0 && beta <= 1, "beta must lie in [0, 1]");
  detail::require(k >= 1, "k must be at least 1");
  const auto nn = static_cast<std::int64_t>(n);
  const Rational qr(q);
  const Rational shrink = 1 + pow_rat(qr, -static_cast<std::int64_t>(k - 1));
  return beta * pow_rat(gamma, nn) * pow_rat(qr, nn) / pow_rat(shrink, nn);
}

/// All k-flats of a small F_q^n as bitmasks over points (bit i is the point with encode() = i),
/// grouped by direction.
class FlatMasks {
 public:
  FlatMasks(const FieldPtr& field, std::size_t n, std::size_t k) : q_(field->q()), n_(n), k_(k) {
    detail::require(k <= n, "flat dimension k exceeds n");
    points_ = checked_pow(q_, n);
    detail::require(points_ <= 64, "bitmask flat tables need q^n <= 64");
    for_each_subspace(field, n, k, [&](const Subspace& A) {
      std::vector<std::uint64_t> shifts;
      for_each_shift(A, [&](const Vec& s) {
        std::uint64_t mask = 0;
        for (const auto& p : Flat(A, s).points()) mask |= std::uint64_t{1} << encode(p, q_);
        shifts.push_back(mask);
      });
      directions_.push_back(std::move(shifts));
    });
  }

  std::size_t point_count() const { return points_; }
  std::size_t direction_count() const { return directions_.size(); }
  const std::vector<std::vector<std::uint64_t>>& directions() const { return directions_; }

  /// Number of directions with an m-rich translate in K.
  std::size_t rich_directions(std::uint64_t K, std::uint64_t m) const {
    std::size_t rich = 0;
    for (const auto& shifts : directions_) {
      for (auto f : shifts) {
        if (static_cast<std::uint64_t>(std::popcount(K & f)) >= m) {
          ++rich;
          break;
        }
      }
    }
    return rich;
  }

  bool furstenberg(std::uint64_t K, std::uint64_t m, const Rational& beta) const {
    return Rational(rich_directions(K, m)) >= beta * Rational(direction_count());
  }

 private:
  std::uint32_t q_;
  std::size_t n_;
  std::size_t k_;
  std::uint64_t points_ = 0;
  std::vector<std::vector<std::uint64_t>> directions_;
};

inline PointSet mask_to_set(const FieldPtr& field, std::size_t n, std::uint64_t mask) {
  std::vector<std::uint64_t> codes;
  for (std::uint64_t i = 0; i < 64; ++i)
    if (mask >> i & 1U) codes.push_back(i);
  return PointSet::from_codes(field, n, codes);
}

struct LowerBoundViolation {
  std::uint64_t subset_mask = 0;
  Rational gamma;
  Rational beta;
  Rational bound;
};

struct LowerBoundAudit {
  std::size_t n = 0;
  std::uint32_t q = 0;
  std::size_t k = 0;
  bool exhaustive = true;
  std::uint64_t subsets_checked = 0;
  std::uint64_t furstenberg_instances = 0;  // (subset, grid point) pairs where the property held
  std::vector<LowerBoundViolation> violations;
  bool pass() const { return violations.empty(); }
};

/// Checks |K| >= lower_bound for every K subset of F_q^n that is (k, ceil(gamma q^k), beta)-Furstenberg,
/// over the whole grid. Every subset when q^n <= 12; `samples` seeded random subsets when q^n <= 16.
inline LowerBoundAudit audit_lower_bound_exhaustive(std::size_t n, std::uint32_t q, std::size_t k,
                                                    const std::vector<Rational>& gamma_grid,
                                                    const std::vector<Rational>& beta_grid, std::uint64_t seed = 0,
                                                    std::uint64_t samples = 4096, std::uint64_t budget = kDefaultBudget) {
  auto field = Field::make(q);
  const std::uint64_t points = checked_pow(q, n);
  if (points > 16) {
    throw BudgetExceeded("subset audit needs q^n <= 16, got " + std::to_string(points));
  }
  const FlatMasks table(field, n, k);
  LowerBoundAudit rep{n, q, k, points <= 12, 0, 0, {}};
  const std::uint64_t subsets = rep.exhaustive ? (std::uint64_t{1} << points) : samples;
  const BigInt work = BigInt(subsets) * gamma_grid.size() * beta_grid.size() * gaussian_binomial(n, k, q) *
                      pow_big(BigInt(q), n - k);
  if (work > budget) throw BudgetExceeded("subset audit needs about " + work.str() + " flat checks");

  struct Cell {
    Rational gamma, beta, bound;
    std::uint64_t m;
  };
  std::vector<Cell> cells;
  for (const auto& g : gamma_grid)
    for (const auto& b : beta_grid) {
      const auto query = FurstenbergQuery::from_gamma(q, k, g, b);
      cells.push_back({g, b, lower_bound(n, q, k, g, b), query.m});
    }

  CounterRng rng(seed);
  for (std::uint64_t i = 0; i < subsets; ++i) {
    const std::uint64_t K = rep.exhaustive ? i : rng.below(std::uint64_t{1} << points);
    ++rep.subsets_checked;
    const Rational size(std::popcount(K));
    for (const auto& c : cells) {
      if (!table.furstenberg(K, c.m, c.beta)) continue;
      ++rep.furstenberg_instances;
      if (size < c.bound) rep.violations.push_back({K, c.gamma, c.beta, c.bound});
    }
  }
  return rep;
}

enum class SearchMode { exhaustive, greedy };

struct ExtremalResult {
  std::uint64_t size = 0;
  PointSet witness;
};

/// Smallest (k, m, beta)-Furstenberg set in F_q^n. Exhaustive mode (q^n <= 12) tries sizes in
/// increasing order and returns the first qualifying set in mask order; greedy mode (q^n <= 64)
/// only gives an upper bound. Empty when no set qualifies (m > q^k with beta > 0).
inline std::optional<ExtremalResult> min_furstenberg_size(std::size_t n, std::uint32_t q, std::size_t k,
                                                          std::uint64_t m, const Rational& beta, SearchMode mode) {
  detail::require(beta >= 0 && beta <= 1, "beta must lie in [0, 1]");
  auto field = Field::make(q);
  const std::uint64_t points = checked_pow(q, n);
  if (mode == SearchMode::exhaustive && points > 12) {
    throw BudgetExceeded("exhaustive search needs q^n <= 12, got " + std::to_string(points));
  }
  if (mode == SearchMode::greedy && points > 64) {
    throw BudgetExceeded("greedy search needs q^n <= 64, got " + std::to_string(points));
  }
  const FlatMasks table(field, n, k);
  if (table.furstenberg(0, m, beta)) return ExtremalResult{0, PointSet(field, n)};
  if (BigInt(m) > pow_big(BigInt(q), k)) return std::nullopt;

  if (mode == SearchMode::exhaustive) {
    for (std::uint64_t size = 1; size <= points; ++size) {
      // Gosper's hack: masks with `size` bits in increasing order
      std::uint64_t K = (std::uint64_t{1} << size) - 1;
      const std::uint64_t limit = std::uint64_t{1} << points;
      while (K < limit) {
        if (table.furstenberg(K, m, beta)) return ExtremalResult{size, mask_to_set(field, n, K)};
        const std::uint64_t c = K & (~K + 1);
        const std::uint64_t r = K + c;
        K = (((r ^ K) >> 2U) / c) | r;
      }
    }
    return std::nullopt;
  }

  // Greedy: fill the fullest translate among directions that still lack an m-rich one.
  std::uint64_t K = 0;
  while (!table.furstenberg(K, m, beta)) {
    std::optional<std::uint64_t> best;
    int best_count = -1;
    for (const auto& shifts : table.directions()) {
      bool satisfied = false;
      for (auto f : shifts) satisfied = satisfied || static_cast<std::uint64_t>(std::popcount(K & f)) >= m;
      if (satisfied) continue;
      for (auto f : shifts) {
        const int c = std::popcount(K & f);
        if (c > best_count) {
          best_count = c;
          best = f;
        }
      }
    }
    const std::uint64_t missing = *best & ~K;
    K |= missing & (~missing + 1);  // lowest missing point
  }
  return ExtremalResult{static_cast<std::uint64_t>(std::popcount(K)), mask_to_set(field, n, K)};
}

}  // namespace kakeya_hash
