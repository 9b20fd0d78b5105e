// Smallest sets in F_3^2 that contain a full line in every direction, and how they compare with
// the lower bound beta gamma^n q^n (1 + 1/q)^-n.

#include <iostream>

#include "kakeya_hash/kakeya_hash.hpp"

using namespace kakeya_hash;

int main() {
  for (std::uint32_t q : {2U, 3U}) {
    const auto best = min_furstenberg_size(2, q, 1, q, 1, SearchMode::exhaustive);
    std::cout << "F_" << q << "^2 Kakeya set: minimum size " << best->size << ", e.g.";
    for (const auto& x : best->witness) std::cout << " (" << x[0] << "," << x[1] << ")";
    std::cout << "\n  lower bound " << to_string(lower_bound(2, q, 1, 1, 1)) << "\n";
  }
  const auto greedy = min_furstenberg_size(3, 2, 2, 3, Rational(1, 2), SearchMode::greedy);
  std::cout << "F_2^3, 3-rich planes in half the directions: greedy finds size " << greedy->size << "\n";
}
