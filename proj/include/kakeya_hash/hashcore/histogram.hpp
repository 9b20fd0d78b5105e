#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rational.hpp"
#include "kakeya_hash/hashcore/point_set.hpp"
#include "kakeya_hash/linalg/matrix.hpp"

namespace kakeya_hash {

/// Bucket index of L x: the base-q encoding of the image, coordinate 0 most significant.
inline std::uint64_t apply_map(const LinearMap& L, std::span<const Elem> x) {
  const Vec y = L(x);
  return encode(y, L.field()->q());
}

/// Occupancy of the q^t buckets of F_q^t under a map applied to a set. Buckets absent from
/// `counts` are empty.
struct BucketHistogram {
  std::size_t t = 0;
  std::uint32_t q = 2;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t total = 0;

  BigInt bucket_count() const { return pow_big(BigInt(q), t); }

  std::uint64_t count(std::uint64_t bucket) const {
    auto it = counts.find(bucket);
    return it == counts.end() ? 0 : it->second;
  }

  std::uint64_t max_load() const {
    std::uint64_t m = 0;
    for (const auto& [_, c] : counts) m = std::max(m, c);
    return m;
  }
};

namespace detail {

/// Over F_2 with n <= 64 the image of x is the XOR of the columns selected by x's bits.
inline bool binary_fast_path(const LinearMap& L) {
  return L.field()->q() == 2 && L.input_dim() <= 64 && L.output_dim() <= 64;
}

inline std::vector<std::uint64_t> packed_columns(const LinearMap& L) {
  const Matrix& m = L.matrix();
  const std::size_t t = m.rows();
  std::vector<std::uint64_t> cols(m.cols(), 0);
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < t; ++r)
      if (m(r, c) != 0) cols[c] |= 1ULL << (t - 1 - r);
  return cols;
}

}  // namespace detail

inline BucketHistogram histogram(const LinearMap& L, const PointSet& S) {
  detail::require(!S.empty(), "histogram of an empty set");
  detail::require(S.dim() == L.input_dim(), "dimension mismatch: map takes F_q^" + std::to_string(L.input_dim()) +
                                                ", set lives in F_q^" + std::to_string(S.dim()));
  const std::uint32_t q = L.field()->q();
  checked_pow(q, L.output_dim());
  BucketHistogram h{L.output_dim(), q, {}, S.size()};
  if (detail::binary_fast_path(L)) {
    const auto cols = detail::packed_columns(L);
    for (const auto& x : S) {
      std::uint64_t y = 0;
      for (std::size_t c = 0; c < x.size(); ++c)
        if (x[c] != 0) y ^= cols[c];
      ++h.counts[y];
    }
    return h;
  }
  for (const auto& x : S) ++h.counts[apply_map(L, x)];
  return h;
}

namespace detail {

/// |count * q^t - total| summed (l1) or maximized (linf) over all q^t buckets, empty ones included.
/// The distance is that value over total * q^t.
inline BigInt scaled_deviation(const BucketHistogram& h, bool take_max) {
  const BigInt buckets = h.bucket_count();
  const BigInt total = h.total;
  BigInt acc = 0;
  for (const auto& [_, c] : h.counts) {
    BigInt dev = BigInt(c) * buckets - total;
    if (dev < 0) dev = -dev;
    if (take_max) {
      if (dev > acc) acc = dev;
    } else {
      acc += dev;
    }
  }
  const BigInt empty = buckets - BigInt(h.counts.size());
  if (empty > 0) {
    if (take_max) {
      if (total > acc) acc = total;
    } else {
      acc += empty * total;
    }
  }
  return acc;
}

}  // namespace detail

/// max over every y in F_q^t of |Pr[L(U_S) = y] - q^{-t}|.
inline Rational linf_distance(const BucketHistogram& h) {
  detail::require(h.total >= 1, "distance of an empty histogram");
  return make_rational(detail::scaled_deviation(h, true), BigInt(h.total) * h.bucket_count());
}

/// sum over every y in F_q^t of |Pr[L(U_S) = y] - q^{-t}|.
inline Rational l1_distance(const BucketHistogram& h) {
  detail::require(h.total >= 1, "distance of an empty histogram");
  return make_rational(detail::scaled_deviation(h, false), BigInt(h.total) * h.bucket_count());
}

/// True iff L(U_S) is tau/q^t-close to uniform in the l-infinity norm (inclusive).
inline bool linf_pass(const BucketHistogram& h, const Rational& tau) {
  detail::require(tau >= 0, "tau must be nonnegative");
  // dev / (total q^t) <= tau / q^t  <=>  dev <= tau * total
  return Rational(detail::scaled_deviation(h, true)) <= tau * Rational(BigInt(h.total));
}

inline bool linf_pass(const LinearMap& L, const PointSet& S, const Rational& tau) {
  return linf_pass(histogram(L, S), tau);
}

}  // namespace kakeya_hash
