#pragma once

#include <cstdint>
#include <limits>

namespace kakeya_hash {

/// Counter-based 64-bit generator: output i is a SplitMix64 finalizer applied to key + i * golden.
/// Any output can be computed without producing its predecessors, and two streams with distinct
/// keys never share state. Meets the UniformRandomBitGenerator requirements.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(mix(seed)) {}

  /// Stream for one trial of an experiment; independent of the order trials are run in.
  static CounterRng for_trial(std::uint64_t seed, std::uint64_t trial_index) {
    return CounterRng(seed ^ trial_index);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform in [0, bound) without modulo bias. bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - (max() % bound);
    std::uint64_t x = (*this)();
    while (x >= limit) x = (*this)();
    return x % bound;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace kakeya_hash
