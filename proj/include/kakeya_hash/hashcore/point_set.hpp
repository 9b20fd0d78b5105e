#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rng.hpp"
#include "kakeya_hash/linalg/vector.hpp"

namespace kakeya_hash {

/// A finite set S of points of F_q^n, kept sorted (lexicographically, which matches encode() order)
/// and free of duplicates.
class PointSet {
 public:
  PointSet(FieldPtr field, std::size_t n) : field_(std::move(field)), n_(n) {
    detail::require(field_ != nullptr, "null field");
  }

  PointSet(FieldPtr field, std::size_t n, std::vector<Vec> points) : PointSet(std::move(field), n) {
    for (const auto& p : points) {
      detail::require(p.size() == n_, "point has wrong dimension");
      for (Elem e : p) detail::require(e < field_->q(), "coordinate out of range for " + field_->name());
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    points_ = std::move(points);
  }

  static PointSet from_codes(FieldPtr field, std::size_t n, const std::vector<std::uint64_t>& codes) {
    const std::uint32_t q = field->q();
    const std::uint64_t space = checked_pow(q, n);
    std::vector<Vec> pts;
    pts.reserve(codes.size());
    for (auto c : codes) {
      detail::require(c < space, "point code out of range");
      pts.push_back(decode(c, n, q));
    }
    return PointSet(std::move(field), n, std::move(pts));
  }

  static PointSet full(FieldPtr field, std::size_t n) {
    std::vector<Vec> pts;
    for_each_vector(field->q(), n, [&](const Vec& v) { pts.push_back(v); });
    return PointSet(std::move(field), n, std::move(pts));
  }

  /// `size` distinct points drawn uniformly from F_q^n (every size-subset equally likely).
  static PointSet random(CounterRng& rng, FieldPtr field, std::size_t n, std::uint64_t size) {
    const std::uint64_t space = checked_pow(field->q(), n);
    detail::require(size <= space, "cannot draw more distinct points than F_q^n holds");
    // Floyd's algorithm: one draw per element, no rejection loop.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(size * 2);
    for (std::uint64_t j = space - size; j < space; ++j) {
      const std::uint64_t r = rng.below(j + 1);
      if (!chosen.insert(r).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> codes(chosen.begin(), chosen.end());
    std::sort(codes.begin(), codes.end());
    return from_codes(std::move(field), n, codes);
  }

  const FieldPtr& field() const { return field_; }
  std::size_t dim() const { return n_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Vec>& points() const { return points_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool contains(const Vec& x) const { return std::binary_search(points_.begin(), points_.end(), x); }

  std::vector<std::uint64_t> codes() const {
    std::vector<std::uint64_t> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(encode(p, field_->q()));
    return out;
  }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.n_ == b.n_ && a.field_->q() == b.field_->q() && a.points_ == b.points_;
  }

 private:
  FieldPtr field_;
  std::size_t n_;
  std::vector<Vec> points_;
};

}  // namespace kakeya_hash
