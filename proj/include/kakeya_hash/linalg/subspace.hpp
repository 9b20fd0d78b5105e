#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rational.hpp"
#include "kakeya_hash/linalg/matrix.hpp"
#include "kakeya_hash/linalg/vector.hpp"

namespace kakeya_hash {

/// A k-dimensional subspace of F_q^n held by its reduced row-echelon basis. Two subspaces are
/// equal exactly when their bases are identical.
class Subspace {
 public:
  /// Row span of `spanning`; rows may be dependent.
  static Subspace span(const Matrix& spanning) {
    auto red = rref(spanning);
    Matrix basis(spanning.field(), red.rank, spanning.cols());
    for (std::size_t r = 0; r < red.rank; ++r)
      for (std::size_t c = 0; c < spanning.cols(); ++c) basis(r, c) = red.rref(r, c);
    return Subspace(std::move(basis), std::move(red.pivots));
  }

  /// Adopts a basis already in reduced row-echelon form with the given pivots; throws otherwise.
  static Subspace from_rref(Matrix basis, std::vector<std::size_t> pivots) {
    detail::require(pivots.size() == basis.rows(), "pivot count must equal basis rows");
    for (std::size_t r = 0; r < basis.rows(); ++r) {
      detail::require(pivots[r] < basis.cols() && (r == 0 || pivots[r] > pivots[r - 1]), "pivots must increase");
      for (std::size_t c = 0; c < pivots[r]; ++c) detail::require(basis(r, c) == 0, "entry left of pivot");
      for (std::size_t i = 0; i < basis.rows(); ++i) {
        detail::require(basis(i, pivots[r]) == (i == r ? 1U : 0U), "pivot column not a unit vector");
      }
    }
    return Subspace(std::move(basis), std::move(pivots));
  }

  static Subspace zero(FieldPtr field, std::size_t n) { return Subspace(Matrix(std::move(field), 0, n), {}); }

  static Subspace whole(FieldPtr field, std::size_t n) {
    std::vector<std::size_t> piv(n);
    for (std::size_t i = 0; i < n; ++i) piv[i] = i;
    return Subspace(Matrix::identity(std::move(field), n), std::move(piv));
  }

  const FieldPtr& field() const { return basis_.field(); }
  std::size_t ambient_dim() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// v minus the combination of basis rows that clears every pivot coordinate of v.
  Vec reduce(std::span<const Elem> v) const {
    detail::require(v.size() == ambient_dim(), "dimension mismatch reducing by subspace");
    const Field& f = *field();
    Vec out(v.begin(), v.end());
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      const Elem coef = out[pivots_[i]];
      if (coef == 0) continue;
      const Elem nc = f.neg(coef);
      auto row = basis_.row(i);
      for (std::size_t c = pivots_[i]; c < out.size(); ++c) {
        if (row[c] != 0) out[c] = f.add(out[c], f.mul(nc, row[c]));
      }
    }
    return out;
  }

  bool contains(std::span<const Elem> v) const {
    const Vec r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](Elem e) { return e == 0; });
  }

  /// Point of the subspace with coordinates `coords` in the basis.
  Vec combine(std::span<const Elem> coords) const {
    detail::require(coords.size() == dim(), "coordinate count mismatch");
    const Field& f = *field();
    Vec out(ambient_dim(), 0);
    for (std::size_t i = 0; i < dim(); ++i) {
      if (coords[i] == 0) continue;
      auto row = basis_.row(i);
      for (std::size_t c = 0; c < out.size(); ++c) out[c] = f.add(out[c], f.mul(coords[i], row[c]));
    }
    return out;
  }

  bool is_subspace_of(const Subspace& other) const {
    for (std::size_t i = 0; i < dim(); ++i) {
      if (!other.contains(basis_.row(i))) return false;
    }
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

 private:
  Subspace(Matrix basis, std::vector<std::size_t> pivots) : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

/// An affine flat shift + subspace, with the shift reduced to vanish on every pivot coordinate so
/// each flat has exactly one representation.
class Flat {
 public:
  Flat(Subspace subspace, Vec shift) : subspace_(std::move(subspace)), shift_(subspace_.reduce(shift)) {}

  const Subspace& subspace() const { return subspace_; }
  const Vec& shift() const { return shift_; }
  std::size_t dim() const { return subspace_.dim(); }
  std::size_t ambient_dim() const { return subspace_.ambient_dim(); }

  bool contains(std::span<const Elem> x) const { return subspace_.reduce(x) == shift_; }

  /// All q^k points, ordered by basis coordinates.
  std::vector<Vec> points() const {
    std::vector<Vec> out;
    const Field& f = *subspace_.field();
    for_each_vector(f.q(), dim(), [&](const Vec& coords) {
      out.push_back(vec_add(f, shift_, subspace_.combine(coords)));
    });
    return out;
  }

  friend bool operator==(const Flat& a, const Flat& b) { return a.subspace_ == b.subspace_ && a.shift_ == b.shift_; }

 private:
  Subspace subspace_;
  Vec shift_;
};

inline Flat flat_canonicalize(std::span<const Elem> shift, const Subspace& sub) {
  return Flat(sub, Vec(shift.begin(), shift.end()));
}

/// Solution space of L x = 0.
inline Subspace kernel(const Matrix& L) {
  const auto red = rref(L);
  const std::size_t n = L.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : red.pivots) is_pivot[p] = true;
  const Field& f = *L.field();
  std::vector<Vec> rows;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec v(n, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < red.rank; ++i) v[red.pivots[i]] = f.neg(red.rref(i, free));
    rows.push_back(std::move(v));
  }
  if (rows.empty()) return Subspace::zero(L.field(), n);
  return Subspace::span(Matrix::from_rows(L.field(), rows));
}

/// Number of k-dimensional subspaces of F_q^n.
inline BigInt gaussian_binomial(std::size_t n, std::size_t k, std::uint64_t q) {
  detail::require(k <= n, "gaussian_binomial needs k <= n");
  BigInt num = 1;
  BigInt den = 1;
  const BigInt qb = q;
  for (std::size_t i = 0; i < k; ++i) {
    num *= pow_big(qb, n - i) - 1;
    den *= pow_big(qb, k - i) - 1;
  }
  return num / den;
}

/// Visits every k-dimensional subspace of F_q^n exactly once: pivot sets in lexicographic order,
/// and within a pivot set the free entries (row-major, first entry most significant) counting up.
/// `visit` may return false to stop.
template <class F>
void for_each_subspace(const FieldPtr& field, std::size_t n, std::size_t k, F&& visit) {
  detail::require(k <= n, "subspace dimension exceeds ambient dimension");
  const std::uint32_t q = field->q();
  std::vector<std::size_t> piv(k);
  for (std::size_t i = 0; i < k; ++i) piv[i] = i;
  while (true) {
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : piv) is_pivot[p] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free_slots;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = piv[r] + 1; c < n; ++c)
        if (!is_pivot[c]) free_slots.emplace_back(r, c);

    Matrix basis(field, k, n);
    for (std::size_t r = 0; r < k; ++r) basis(r, piv[r]) = 1;
    Vec digits(free_slots.size(), 0);
    do {
      for (std::size_t s = 0; s < free_slots.size(); ++s) basis(free_slots[s].first, free_slots[s].second) = digits[s];
      const Subspace sub = Subspace::from_rref(basis, piv);
      if (!detail::keep_going(visit, sub)) return;
    } while (detail::odometer_next(digits, q));

    // next k-combination of {0..n-1}
    std::size_t i = k;
    while (i > 0 && piv[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++piv[i - 1];
    for (std::size_t j = i; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

/// Canonical shifts of `sub`: vectors that vanish on every pivot, in increasing encode() order.
template <class F>
void for_each_shift(const Subspace& sub, F&& visit) {
  const std::size_t n = sub.ambient_dim();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : sub.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> free_coords;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_coords.push_back(c);
  Vec digits(free_coords.size(), 0);
  Vec shift(n, 0);
  do {
    for (std::size_t i = 0; i < free_coords.size(); ++i) shift[free_coords[i]] = digits[i];
    if (!detail::keep_going(visit, std::as_const(shift))) return;
  } while (detail::odometer_next(digits, sub.field()->q()));
}

/// Every k-flat of F_q^n exactly once, grouped by direction in for_each_subspace order.
template <class F>
void for_each_flat(const FieldPtr& field, std::size_t n, std::size_t k, F&& visit) {
  bool stopped = false;
  for_each_subspace(field, n, k, [&](const Subspace& sub) {
    for_each_shift(sub, [&](const Vec& shift) {
      if (!detail::keep_going(visit, Flat(sub, shift))) {
        stopped = true;
        return false;
      }
      return true;
    });
    return !stopped;
  });
}

inline std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, std::size_t n, std::size_t k) {
  std::vector<Subspace> out;
  for_each_subspace(field, n, k, [&](const Subspace& s) { out.push_back(s); });
  return out;
}

inline std::vector<Flat> enumerate_flats(const FieldPtr& field, std::size_t n, std::size_t k) {
  std::vector<Flat> out;
  for_each_flat(field, n, k, [&](const Flat& fl) { out.push_back(fl); });
  return out;
}

}  // namespace kakeya_hash
