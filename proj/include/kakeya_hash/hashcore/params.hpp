#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rational.hpp"
#include "kakeya_hash/core/surd.hpp"

namespace kakeya_hash {

/// Which parameter rule produced a HashParams.
enum class Variant {
  large_field,                // F_q, general tau: t = r - 3
  large_field_improved,       // F_q, tau > 1, no factor 32 in the field-size requirement
  binary,                     // F_2 via blocks of F_{2^ell}, general tau
  binary_two_stage,           // injective pre-hash to F_2^m, then `binary` on m coordinates
  binary_improved,            // F_2, tau > 1
  binary_improved_two_stage,  // pre-hash, then `binary_improved` on m coordinates
};

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::large_field: return "large_field";
    case Variant::large_field_improved: return "large_field_improved";
    case Variant::binary: return "binary";
    case Variant::binary_two_stage: return "binary_two_stage";
    case Variant::binary_improved: return "binary_improved";
    case Variant::binary_improved_two_stage: return "binary_improved_two_stage";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  for (auto v : {Variant::large_field, Variant::large_field_improved, Variant::binary, Variant::binary_two_stage,
                 Variant::binary_improved, Variant::binary_improved_two_stage}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown variant '" + s + "'");
}

inline bool is_improved(Variant v) {
  return v == Variant::large_field_improved || v == Variant::binary_improved || v == Variant::binary_improved_two_stage;
}

inline bool is_two_stage(Variant v) { return v == Variant::binary_two_stage || v == Variant::binary_improved_two_stage; }

/// Outcome of checking a rule's hypotheses; each failed clause is described in `failed`.
struct HypothesisReport {
  std::vector<std::string> failed;

  bool ok() const { return failed.empty(); }
  void require(bool cond, const std::string& clause) {
    if (!cond) failed.push_back(clause);
  }
  std::string describe() const {
    std::ostringstream os;
    for (const auto& f : failed) os << f << "\n";
    return os.str();
  }
};

struct HashParams {
  Variant variant = Variant::large_field;
  std::optional<Rational> tau;
  std::optional<Rational> delta;
  std::int64_t t = 0;
  /// Exact upper bound on the entropy loss log2|S| - t. Binary variants measure it in bits
  /// (ceil(log2|S|) - t); large-field variants measure it in F_q symbols ((r + 1) - t).
  Rational entropy_loss;
  /// The block field F_{2^ell} (binary variants) or F_q (large-field variants).
  std::uint64_t ell = 0;
  BigInt q;
  std::uint64_t n_blocks = 0;  // coordinates over F_q after grouping bits into blocks
  std::int64_t r = 0;          // q^r < |S| <= q^{r+1}
  std::uint64_t m = 0;         // pre-hash output length for two-stage variants, else 0
  /// Whether t meets the guaranteed lower bound, checked by exact power comparison.
  bool meets_stated_bound = true;
  /// The stated lower bound on t, rendered for reports only.
  double stated_bound_approx = 0;
  /// Binary variants: set when the block size had to be chosen for the block count n' rather than
  /// for n, because the latter left t below the bound.
  bool per_block_fallback = false;
  std::string fallback_reason;
};

namespace detail {

inline std::string str(const Rational& r) { return to_string(r); }

/// (1+tau)/(tau delta)^2, or (1+tau)/((tau - sqrt tau) delta)^2 for the improved variants.
inline QuadSurd density_factor(const Rational& tau, const Rational& delta, bool improved) {
  if (!improved) return QuadSurd::rational((1 + tau) / (tau * tau * delta * delta), tau);
  const QuadSurd gap = QuadSurd::rational(tau, tau) - QuadSurd::root(tau);
  const QuadSurd denom = (delta * delta) * (gap * gap);
  return QuadSurd::rational(1 + tau, tau) / denom;
}

/// n * max(factor, 1): the threshold max(n(1+tau)/(...)^2, n) that every field-size rule uses.
inline QuadSurd size_threshold(std::uint64_t n, const QuadSurd& factor) {
  const QuadSurd one = QuadSurd::rational(1, factor.radicand());
  const QuadSurd& mx = factor >= one ? factor : one;
  return Rational(n) * mx;
}

inline QuadSurd as_surd(const BigInt& x, const Rational& radicand) { return QuadSurd::rational(Rational(x), radicand); }

}  // namespace detail

/// Checks the hypotheses for hashing F_q^n: q >= 32 max(n(1+tau)/(tau delta)^2, n) with n >= 5, or
/// for the improved variant tau > 1, delta in (0, 1/10), n >= 20 and q >= max(n(1+tau)/((tau-sqrt tau)^2 delta^2), n).
inline HypothesisReport hypothesis_check_large_field(const BigInt& q, std::uint64_t n, const Rational& tau,
                                                     const Rational& delta, Variant variant) {
  detail::require(variant == Variant::large_field || variant == Variant::large_field_improved,
                  "hypothesis_check_large_field takes a large-field variant");
  HypothesisReport rep;
  const bool improved = variant == Variant::large_field_improved;
  rep.require(tau > 0, "tau > 0 (tau = " + detail::str(tau) + ")");
  if (improved) {
    rep.require(tau > 1, "tau > 1 (tau = " + detail::str(tau) + ")");
    rep.require(delta > 0 && delta < Rational(1, 10), "delta in (0, 1/10) (delta = " + detail::str(delta) + ")");
    rep.require(n >= 20, "n >= 20 (n = " + std::to_string(n) + ")");
  } else {
    rep.require(delta > 0 && delta < 1, "delta in (0, 1) (delta = " + detail::str(delta) + ")");
    rep.require(n >= 5, "n >= 5 (n = " + std::to_string(n) + ")");
  }
  if (!rep.ok()) return rep;
  const QuadSurd x = detail::size_threshold(n, detail::density_factor(tau, delta, improved));
  const Rational factor = improved ? Rational(1) : Rational(32);
  const QuadSurd need = factor * x;
  std::ostringstream clause;
  clause << "q >= " << (improved ? "" : "32 * ") << "max(n(1+tau)/" << (improved ? "((tau-sqrt tau) delta)^2" : "(tau delta)^2")
         << ", n) (q = " << q << ", threshold ~ " << need.to_double() << ")";
  rep.require(detail::as_surd(q, tau) >= need, clause.str());
  return rep;
}

/// The r with q^r < size <= q^{r+1}, for size >= 2.
inline std::int64_t bracket_exponent(const BigInt& q, const BigInt& size) {
  detail::require(q >= 2, "q must be at least 2");
  detail::require(size >= 2, "set size must be at least 2");
  std::int64_t r = 0;
  BigInt next = q;  // q^{r+1}
  while (next < size) {
    next *= q;
    ++r;
  }
  return r;
}

/// t = r - 3 where q^r < |S| <= q^{r+1}; needs 4 <= r <= n - 1.
inline HashParams choose_t_large_field(const BigInt& q, const BigInt& set_size, std::uint64_t n) {
  detail::require(set_size >= 2, "set size must be at least 2");
  const std::int64_t r = bracket_exponent(q, set_size);
  if (r < 4) {
    throw SideConditionError("need q^r < |S| with r >= 4, i.e. |S| > q^4; got r = " + std::to_string(r));
  }
  if (r > static_cast<std::int64_t>(n) - 1) {
    throw SideConditionError("need r <= n - 1; got r = " + std::to_string(r) + " with n = " + std::to_string(n));
  }
  HashParams hp;
  hp.variant = Variant::large_field;
  hp.t = r - 3;
  hp.r = r;
  hp.q = q;
  hp.ell = 1;
  hp.n_blocks = n;
  hp.entropy_loss = Rational((r + 1) - hp.t);
  hp.stated_bound_approx = log2_approx(set_size) / log2_approx(q) - 4;
  return hp;
}

/// Smallest t >= 0 with 2^t >= |S|(|S|-1)/(2 delta): at that length a (1-delta)-fraction of surjective
/// F_2-linear maps are injective on S.
inline std::int64_t injective_t(const BigInt& set_size, const Rational& delta) {
  detail::require(set_size >= 2, "injective pre-hash needs |S| >= 2");
  detail::require(delta > 0 && delta <= 1, "delta must lie in (0, 1]");
  return ceil_log2(Rational(set_size * (set_size - 1)) / (2 * delta));
}

namespace detail {

struct BlockRecipe {
  std::uint64_t ell = 0;
  std::uint64_t n_blocks = 0;
  std::int64_t r = 0;
  std::int64_t t = 0;
};

/// Groups n bits into n' = ceil(n/ell) symbols of F_{2^ell} and sets t = (r - 3) ell. The block size
/// is the smallest ell with 2^ell >= factor * X, where X = max(N(1+tau)/(...)^2, N) and N is n itself
/// (`per_block` false) or the block count n' (`per_block` true).
inline std::optional<BlockRecipe> block_recipe(std::uint64_t n, const BigInt& set_size, const QuadSurd& density,
                                               const Rational& factor, std::uint64_t min_blocks, bool per_block,
                                               std::string& why) {
  const Rational& rad = density.radicand();
  std::uint64_t ell = 1;
  for (;; ++ell) {
    const std::uint64_t blocks = per_block ? (n + ell - 1) / ell : n;
    if (QuadSurd::rational(pow_rat(2, static_cast<std::int64_t>(ell)), rad) >= factor * size_threshold(blocks, density))
      break;
    if (ell > 1000000) {
      why = "no block size up to 10^6 bits meets the field-size requirement";
      return std::nullopt;
    }
  }
  BlockRecipe rec;
  rec.ell = ell;
  rec.n_blocks = (n + ell - 1) / ell;
  if (rec.n_blocks < min_blocks) {
    why = "block count n' = " + std::to_string(rec.n_blocks) + " below " + std::to_string(min_blocks);
    return std::nullopt;
  }
  const std::int64_t bits = ceil_log2(Rational(set_size));
  rec.r = (bits + static_cast<std::int64_t>(ell) - 1) / static_cast<std::int64_t>(ell) - 1;
  if (rec.r < 4 || rec.r > static_cast<std::int64_t>(rec.n_blocks) - 1) {
    why = "bracket exponent r = " + std::to_string(rec.r) + " outside [4, n'-1] with n' = " + std::to_string(rec.n_blocks);
    return std::nullopt;
  }
  rec.t = (rec.r - 3) * static_cast<std::int64_t>(ell);
  return rec;
}

/// Hypotheses of the single-stage binary rules on n coordinates.
inline void check_binary_single(HypothesisReport& rep, std::uint64_t n, const BigInt& set_size, const Rational& tau,
                                const Rational& delta, bool improved, const std::string& prefix) {
  const QuadSurd x = size_threshold(n, density_factor(tau, delta, improved));
  const QuadSurd s = as_surd(set_size, tau);
  const QuadSurd x4 = x.pow(4);
  if (improved) {
    rep.require(s > x4, prefix + "|S| > max(n^4(1+tau)^4/((tau-sqrt tau) delta)^8, n^4)");
    rep.require(n >= 20 * static_cast<std::uint64_t>(x.ceil_log2()),
                prefix + "n >= 20 ceil(log2 max(n(1+tau)/((tau-sqrt tau) delta)^2, n))");
  } else {
    rep.require(s > Rational(pow_big(2, 20)) * x4, prefix + "|S| > 2^20 max(n^4(1+tau)^4/(tau delta)^8, n^4)");
    rep.require(n >= 5 * static_cast<std::uint64_t>(x.ceil_log2()) + 25,
                prefix + "n >= 5 ceil(log2 max(n(1+tau)/(tau delta)^2, n)) + 25");
  }
}

inline std::uint64_t prehash_length(const BigInt& set_size, const Rational& delta) {
  // m = log2(|S|(|S|-1)/delta), rounded up; equals injective_t(|S|, delta/2)
  return static_cast<std::uint64_t>(ceil_log2(Rational(set_size * (set_size - 1)) / delta));
}

}  // namespace detail

/// Hypotheses of a binary rule, evaluated exactly. For two-stage variants this includes both the
/// stated conditions on m and the hypotheses of the single-stage rule applied to the pre-hashed set.
inline HypothesisReport check_binary_hypotheses(std::uint64_t n, const BigInt& set_size, const Rational& tau,
                                                const Rational& delta, Variant variant) {
  detail::require(variant == Variant::binary || variant == Variant::binary_two_stage ||
                      variant == Variant::binary_improved || variant == Variant::binary_improved_two_stage,
                  "check_binary_hypotheses takes a binary variant");
  HypothesisReport rep;
  const bool improved = is_improved(variant);
  rep.require(tau > 0, "tau > 0 (tau = " + detail::str(tau) + ")");
  if (improved) {
    rep.require(tau > 1, "tau > 1 (tau = " + detail::str(tau) + ")");
    rep.require(delta > 0 && delta <= Rational(1, 10), "delta in (0, 1/10] (delta = " + detail::str(delta) + ")");
  } else {
    rep.require(delta > 0 && delta < 1, "delta in (0, 1) (delta = " + detail::str(delta) + ")");
    if (variant == Variant::binary_two_stage) rep.require(tau < 1, "tau in (0, 1) (tau = " + detail::str(tau) + ")");
  }
  rep.require(set_size >= 2, "|S| >= 2");
  rep.require(n >= 1, "n >= 1");
  if (!rep.ok()) return rep;
  rep.require(set_size <= pow_big(2, n), "|S| <= 2^n");

  if (!is_two_stage(variant)) {
    detail::check_binary_single(rep, n, set_size, tau, delta, improved, "");
    return rep;
  }
  const std::uint64_t m = detail::prehash_length(set_size, delta);
  const QuadSurd s = detail::as_surd(set_size, tau);
  const QuadSurd y = detail::size_threshold(m, detail::density_factor(tau, delta / 2, improved));
  if (improved) {
    rep.require(s > y.pow(4), "|S| > m^4 max(2^8(1+tau)^4/((tau-sqrt tau) delta)^8, 1)");
    rep.require(m >= 20 * static_cast<std::uint64_t>(y.ceil_log2()),
                "m >= 20 ceil(log2(m max(4(1+tau)/((tau-sqrt tau)^2 delta^2), 1)))");
  } else {
    // as stated: the first factor is m, not m^4
    const QuadSurd k8 = detail::density_factor(tau, delta / 2, false);
    const QuadSurd one = QuadSurd::rational(1, tau);
    const QuadSurd mx = k8 >= one ? k8 : one;
    rep.require(s > Rational(pow_big(2, 20) * m) * mx.pow(4), "|S| > 2^20 m max(2^8(1+tau)^4/(tau delta)^8, 1)");
    // m >= 5 log2(Y) + 25  <=>  m >= 25 and 2^(m-25) >= Y^5
    rep.require(m >= 25 && QuadSurd::rational(pow_rat(2, static_cast<std::int64_t>(m) - 25), tau) >= y.pow(5),
                "m >= 5 log2(m max(4(1+tau)/(tau delta)^2, 1)) + 25");
  }
  detail::check_binary_single(rep, m, set_size, tau, delta / 2, improved, "pre-hashed stage (n = m, delta/2): ");
  return rep;
}

/// Output length for hashing S subset F_2^n under a binary rule. The existential t is made
/// concrete by grouping bits into symbols of F_{2^ell} and applying the large-field rule, with ell
/// sized for all n coordinates. When that t misses the guaranteed lower bound the block size is
/// re-chosen for the block count (recorded in per_block_fallback); a remaining shortfall throws
/// logic_error rather than being clamped.
inline HashParams choose_t_binary(std::uint64_t n, const BigInt& set_size, const Rational& tau, const Rational& delta,
                                  Variant variant) {
  const HypothesisReport rep = check_binary_hypotheses(n, set_size, tau, delta, variant);
  if (!rep.ok()) throw SideConditionError("side conditions violated:\n" + rep.describe());

  const bool improved = is_improved(variant);
  HashParams hp;
  hp.variant = variant;
  hp.tau = tau;
  hp.delta = delta;
  std::uint64_t coords = n;
  Rational stage_delta = delta;
  if (is_two_stage(variant)) {
    hp.m = detail::prehash_length(set_size, delta);
    coords = hp.m;
    stage_delta = delta / 2;
  }
  const QuadSurd density = detail::density_factor(tau, stage_delta, improved);
  const QuadSurd x = detail::size_threshold(coords, density);
  const std::int64_t c = improved ? 0 : 20;
  const Rational factor = improved ? Rational(1) : Rational(32);
  const std::uint64_t min_blocks = improved ? 20 : 5;
  // stated bound: t >= log2|S| - 4 log2(X) - c  <=>  2^(t+c) X^4 >= |S|
  auto meets = [&](std::int64_t t) {
    return QuadSurd::rational(pow_rat(2, t + c), tau) * x.pow(4) >= detail::as_surd(set_size, tau);
  };

  std::string why;
  auto rec = detail::block_recipe(coords, set_size, density, factor, min_blocks, false, why);
  if (!rec || !meets(rec->t)) {
    // The field sized for all n coordinates can be so large that few blocks remain and t falls
    // short; sizing it for the n' blocks actually used restores the bound.
    hp.per_block_fallback = true;
    hp.fallback_reason = rec ? "full-dimension block size gives t = " + std::to_string(rec->t) + " below the bound" : why;
    rec = detail::block_recipe(coords, set_size, density, factor, min_blocks, true, why);
  }
  if (!rec) throw std::logic_error("block construction failed under valid hypotheses: " + why);
  hp.ell = rec->ell;
  hp.q = pow_big(2, rec->ell);
  hp.n_blocks = rec->n_blocks;
  hp.r = rec->r;
  hp.t = rec->t;
  hp.entropy_loss = Rational(ceil_log2(Rational(set_size)) - hp.t);
  hp.meets_stated_bound = meets(hp.t);
  hp.stated_bound_approx = log2_approx(set_size) - 4 * std::log2(x.to_double()) - static_cast<double>(c);
  if (!hp.meets_stated_bound) {
    throw std::logic_error("constructed t = " + std::to_string(hp.t) + " falls below the guaranteed lower bound");
  }
  return hp;
}

}  // namespace kakeya_hash
