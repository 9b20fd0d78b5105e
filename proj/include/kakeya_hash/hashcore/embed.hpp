#pragma once

#include <cstddef>
#include <string>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rng.hpp"
#include "kakeya_hash/hashcore/params.hpp"
#include "kakeya_hash/hashcore/point_set.hpp"
#include "kakeya_hash/linalg/sampling.hpp"

namespace kakeya_hash {

/// Groups the bits of x in F_2^n into ceil(n/ell) symbols of F_{2^ell}. Block j holds bits
/// j*ell .. j*ell+ell-1, the first of them as the highest-degree coefficient; the last block is
/// padded with zeros.
inline Vec embed_binary(std::span<const Elem> x, const Field& block_field) {
  detail::require(block_field.p() == 2, "block field must have characteristic 2");
  const std::size_t ell = block_field.ell();
  const std::size_t blocks = (x.size() + ell - 1) / ell;
  Vec out(blocks, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    detail::require(x[i] <= 1, "embed_binary takes a vector over F_2");
    if (x[i] != 0) out[i / ell] |= Elem{1} << (ell - 1 - i % ell);
  }
  return out;
}

/// Inverse of embed_binary, keeping the first n bits.
inline Vec unembed_binary(std::span<const Elem> y, const Field& block_field, std::size_t n) {
  const std::size_t ell = block_field.ell();
  detail::require(n <= y.size() * ell, "too few symbols to recover n bits");
  Vec out(n, 0);
  for (std::size_t i = 0; i < n; ++i) out[i] = (y[i / ell] >> (ell - 1 - i % ell)) & 1U;
  return out;
}

inline PointSet embed_binary(const PointSet& S, const FieldPtr& block_field) {
  detail::require(S.field()->q() == 2, "embed_binary takes a set in F_2^n");
  std::vector<Vec> pts;
  pts.reserve(S.size());
  for (const auto& x : S) pts.push_back(embed_binary(x, *block_field));
  const std::size_t blocks = (S.dim() + block_field->ell() - 1) / block_field->ell();
  return PointSet(block_field, blocks, std::move(pts));
}

/// The F_2-matrix (t*ell x n) of x -> unembed(L(embed(x))) for an F_{2^ell}-linear L.
inline LinearMap block_map_over_f2(const LinearMap& L, std::size_t n) {
  const Field& bf = *L.field();
  const std::size_t ell = bf.ell();
  detail::require(L.input_dim() == (n + ell - 1) / ell, "block map input does not match n");
  const std::size_t out_bits = L.output_dim() * ell;
  auto f2 = Field::make(2);
  Matrix m(f2, out_bits, n);
  Vec unit(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    unit[c] = 1;
    const Vec img = unembed_binary(L(embed_binary(unit, bf)), bf, out_bits);
    for (std::size_t r = 0; r < out_bits; ++r) m(r, c) = img[r];
    unit[c] = 0;
  }
  return LinearMap(std::move(m));
}

/// Draws the hash a binary parameter choice describes: a uniformly random surjective
/// F_{2^ell}-linear map on n' = ceil(n/ell) symbols with r - 3 outputs, returned as its t x n
/// matrix over F_2.
inline LinearMap sample_block_hash(CounterRng& rng, const HashParams& params, std::size_t n) {
  detail::require(params.ell >= 1 && params.r >= 4, "parameters do not describe a block hash");
  if (params.ell > 20) {
    throw SideConditionError("block field F_2^" + std::to_string(params.ell) + " exceeds the supported order 2^20");
  }
  auto bf = Field::make(2, static_cast<std::uint32_t>(params.ell));
  const std::size_t blocks = (n + params.ell - 1) / params.ell;
  const LinearMap big = sample_surjective_map(rng, bf, blocks, static_cast<std::size_t>(params.r - 3));
  return block_map_over_f2(big, n);
}

}  // namespace kakeya_hash
