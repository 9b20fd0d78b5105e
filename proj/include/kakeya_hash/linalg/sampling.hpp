#pragma once

#include <cstddef>
#include <string>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rng.hpp"
#include "kakeya_hash/linalg/matrix.hpp"

namespace kakeya_hash {

inline Matrix sample_matrix(CounterRng& rng, const FieldPtr& field, std::size_t rows, std::size_t cols) {
  Matrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = static_cast<Elem>(rng.below(field->q()));
  return m;
}

/// Uniform over all rank-t t x n matrices: uniform matrices are drawn until one has full row rank.
/// The acceptance probability is prod_{i<t}(1 - q^{i-n}) > 1/4, so the expected number of draws is
/// below 4 even in the worst case (q = 2, t = n) and below 2 whenever t < n or q > 2.
inline LinearMap sample_surjective_map(CounterRng& rng, const FieldPtr& field, std::size_t n, std::size_t t) {
  detail::require(t >= 1, "output dimension t must be at least 1");
  detail::require(t <= n, "no surjective map from F_q^" + std::to_string(n) + " onto F_q^" + std::to_string(t));
  while (true) {
    LinearMap L(sample_matrix(rng, field, t, n));
    if (L.surjective()) return L;
  }
}

}  // namespace kakeya_hash
