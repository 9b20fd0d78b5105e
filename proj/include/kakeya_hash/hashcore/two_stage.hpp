#pragma once

#include <cstddef>
#include <unordered_set>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rng.hpp"
#include "kakeya_hash/hashcore/embed.hpp"
#include "kakeya_hash/hashcore/histogram.hpp"
#include "kakeya_hash/hashcore/params.hpp"
#include "kakeya_hash/hashcore/point_set.hpp"
#include "kakeya_hash/linalg/sampling.hpp"

namespace kakeya_hash {

struct TwoStageResult {
  LinearMap stage1;    // F_2^n -> F_2^m, meant to be injective on S
  LinearMap stage2;    // F_2^m -> F_2^t, the balancing hash
  LinearMap composed;  // stage2 after stage1
  bool stage1_injective = false;
  /// m >= n: no compression is needed, so stage 1 is the identity on F_2^n.
  bool stage1_identity = false;
  BucketHistogram hist;
  Rational linf;
};

namespace detail {

inline LinearMap draw_stage1(CounterRng& rng, std::size_t n, std::size_t m, bool& identity) {
  auto f2 = Field::make(2);
  identity = m >= n;
  if (identity) return LinearMap(Matrix::identity(f2, n));
  return sample_surjective_map(rng, f2, n, m);
}

inline bool injective_on(const LinearMap& L, const PointSet& S) {
  std::unordered_set<std::uint64_t> seen;
  for (const auto& x : S) {
    if (!seen.insert(apply_map(L, x)).second) return false;
  }
  return true;
}

inline TwoStageResult finish(LinearMap l1, LinearMap l2, bool identity, const PointSet& S) {
  LinearMap composed = l2.after(l1);
  const bool inj = injective_on(l1, S);
  BucketHistogram h = histogram(composed, S);
  Rational d = linf_distance(h);
  return {std::move(l1), std::move(l2), std::move(composed), inj, identity, std::move(h), std::move(d)};
}

}  // namespace detail

/// Pre-hash then balance with explicit lengths: stage 1 a uniformly random surjective map onto
/// F_2^m, stage 2 a uniformly random surjective map F_2^m -> F_2^t.
inline TwoStageResult two_stage_hash_with_dims(const PointSet& S, std::size_t m, std::size_t t, CounterRng& rng) {
  detail::require(S.field()->q() == 2, "two-stage hashing takes a set in F_2^n");
  detail::require(S.size() >= 1, "two-stage hashing of an empty set");
  detail::require(m >= 1, "pre-hash length m must be at least 1");
  bool identity = false;
  LinearMap l1 = detail::draw_stage1(rng, S.dim(), m, identity);
  LinearMap l2 = sample_surjective_map(rng, S.field(), l1.output_dim(), t);
  return detail::finish(std::move(l1), std::move(l2), identity, S);
}

/// The full construction: m from the pre-hash length for delta/2, then the block hash that the
/// binary rule (run on m coordinates with delta/2) prescribes. Throws SideConditionError when the
/// variant's side conditions fail, which for realistic set sizes they do.
inline TwoStageResult two_stage_hash(const PointSet& S, const Rational& tau, const Rational& delta, CounterRng& rng,
                                     Variant variant = Variant::binary_two_stage) {
  detail::require(is_two_stage(variant), "two_stage_hash takes a two-stage variant");
  detail::require(S.field()->q() == 2, "two-stage hashing takes a set in F_2^n");
  const std::int64_t m = injective_t(BigInt(S.size()), delta / 2);
  const HashParams p = choose_t_binary(S.dim(), BigInt(S.size()), tau, delta, variant);
  bool identity = false;
  LinearMap l1 = detail::draw_stage1(rng, S.dim(), static_cast<std::size_t>(m), identity);
  LinearMap l2 = sample_block_hash(rng, p, l1.output_dim());
  return detail::finish(std::move(l1), std::move(l2), identity, S);
}

}  // namespace kakeya_hash
