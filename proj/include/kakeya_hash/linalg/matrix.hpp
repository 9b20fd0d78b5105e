#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/linalg/field.hpp"

namespace kakeya_hash {

using Vec = std::vector<Elem>;

/// Dense row-major matrix over a finite field.
class Matrix {
 public:
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    detail::require(field_ != nullptr, "null field");
  }

  Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> data)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(data)) {
    detail::require(field_ != nullptr, "null field");
    detail::require(data_.size() == rows_ * cols_, "matrix data size does not match shape");
    for (Elem e : data_) detail::require(e < field_->q(), "matrix entry out of range for " + field_->name());
  }

  static Matrix from_rows(FieldPtr field, const std::vector<Vec>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<Elem> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
      detail::require(r.size() == cols, "ragged rows");
      data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(std::move(field), rows.size(), cols, std::move(data));
  }

  static Matrix identity(FieldPtr field, std::size_t n) {
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  const FieldPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<Elem>& data() const { return data_; }

  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  Vec column(std::size_t c) const {
    Vec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  Vec apply(std::span<const Elem> x) const {
    detail::require(x.size() == cols_, "dimension mismatch: matrix has " + std::to_string(cols_) +
                                           " columns, vector has " + std::to_string(x.size()));
    const Field& f = *field_;
    Vec y(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      Elem acc = 0;
      const Elem* rp = data_.data() + r * cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (rp[c] != 0 && x[c] != 0) acc = f.add(acc, f.mul(rp[c], x[c]));
      }
      y[r] = acc;
    }
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    detail::require(a.cols_ == b.rows_, "matrix product shape mismatch");
    detail::require(a.field_->q() == b.field_->q() && a.field_->p() == b.field_->p(), "matrix product field mismatch");
    const Field& f = *a.field_;
    Matrix out(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Elem aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
      }
    }
    return out;
  }

  Matrix transpose() const {
    Matrix out(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  /// Columns listed in `which`, in that order.
  Matrix select_columns(std::span<const std::size_t> which) const {
    Matrix out(field_, rows_, which.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t j = 0; j < which.size(); ++j) out(r, j) = (*this)(r, which[j]);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_->q() == b.field_->q() &&
           a.field_->p() == b.field_->p() && a.data_ == b.data_;
  }

 private:
  FieldPtr field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Elem> data_;
};

struct RrefResult {
  Matrix rref;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Gauss-Jordan elimination: columns left to right, the first row at or below the current pivot row
/// holding a nonzero entry is swapped up, scaled to a leading 1, and cleared from every other row.
inline RrefResult rref(Matrix m) {
  const Field& f = *m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(r, j));
    }
    const Elem inv = f.inv(m(r, c));
    if (inv != 1) {
      for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), inv);
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      const Elem factor = m(i, c);
      if (factor == 0) continue;
      const Elem nf = f.neg(factor);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (m(r, j) != 0) m(i, j) = f.add(m(i, j), f.mul(nf, m(r, j)));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), r, std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank; }

/// A t x n matrix used as a hash F_q^n -> F_q^t; `surjective` records whether its rank is t.
class LinearMap {
 public:
  explicit LinearMap(Matrix matrix) : matrix_(std::move(matrix)), surjective_(rank(matrix_) == matrix_.rows()) {}

  const Matrix& matrix() const { return matrix_; }
  const FieldPtr& field() const { return matrix_.field(); }
  std::size_t input_dim() const { return matrix_.cols(); }
  std::size_t output_dim() const { return matrix_.rows(); }
  bool surjective() const { return surjective_; }

  Vec operator()(std::span<const Elem> x) const { return matrix_.apply(x); }

  /// this after `first`: x -> this(first(x)).
  LinearMap after(const LinearMap& first) const { return LinearMap(matrix_ * first.matrix_); }

 private:
  Matrix matrix_;
  bool surjective_;
};

}  // namespace kakeya_hash
