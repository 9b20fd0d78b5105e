#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>

#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/linalg/matrix.hpp"

namespace kakeya_hash {

inline Vec vec_add(const Field& f, std::span<const Elem> a, std::span<const Elem> b) {
  detail::require(a.size() == b.size(), "vector length mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], b[i]);
  return out;
}

inline Vec vec_sub(const Field& f, std::span<const Elem> a, std::span<const Elem> b) {
  detail::require(a.size() == b.size(), "vector length mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.sub(a[i], b[i]);
  return out;
}

inline Vec vec_scale(const Field& f, Elem s, std::span<const Elem> a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.mul(s, a[i]);
  return out;
}

/// q^n, or throws if it does not fit in 64 bits.
inline std::uint64_t checked_pow(std::uint64_t q, std::size_t n) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    detail::require(out <= std::numeric_limits<std::uint64_t>::max() / q, "q^n overflows 64 bits");
    out *= q;
  }
  return out;
}

/// Base-q integer with coordinate 0 as the most significant digit.
inline std::uint64_t encode(std::span<const Elem> v, std::uint32_t q) {
  std::uint64_t code = 0;
  for (Elem e : v) code = code * q + e;
  return code;
}

inline Vec decode(std::uint64_t code, std::size_t n, std::uint32_t q) {
  Vec v(n);
  for (std::size_t i = n; i-- > 0;) {
    v[i] = static_cast<Elem>(code % q);
    code /= q;
  }
  return v;
}

namespace detail {

/// Calls visit on each result; stops early if visit returns false.
template <class F, class... Args>
bool keep_going(F& visit, Args&&... args) {
  if constexpr (std::is_same_v<std::invoke_result_t<F&, Args...>, bool>) {
    return visit(std::forward<Args>(args)...);
  } else {
    visit(std::forward<Args>(args)...);
    return true;
  }
}

/// Advances an odometer over {0..q-1}^len with the last digit fastest. Returns false on wraparound.
inline bool odometer_next(std::span<Elem> digits, std::uint32_t q) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < q) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace detail

/// Visits every vector of F_q^n in increasing encode() order.
template <class F>
void for_each_vector(std::uint32_t q, std::size_t n, F&& visit) {
  Vec v(n, 0);
  do {
    if (!detail::keep_going(visit, std::as_const(v))) return;
  } while (detail::odometer_next(v, q));
}

}  // namespace kakeya_hash
