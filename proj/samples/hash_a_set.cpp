// Hash a random 2^10-point subset of F_2^14 with surjective linear maps of decreasing output length
// and report how far the bucket distribution is from uniform.

#include <iostream>

#include "kakeya_hash/kakeya_hash.hpp"

using namespace kakeya_hash;

int main() {
  auto f2 = Field::make(2);
  CounterRng set_rng(2024);
  const PointSet S = PointSet::random(set_rng, f2, 14, 1024);

  for (std::size_t t = 9; t >= 4; --t) {
    int passes = 0;
    Rational worst = 0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
      CounterRng rng = CounterRng::for_trial(7, trial);
      const LinearMap L = sample_surjective_map(rng, f2, S.dim(), t);
      const BucketHistogram h = histogram(L, S);
      if (linf_pass(h, 1)) ++passes;
      // distance scaled by q^t, i.e. in units of the uniform bucket probability
      const Rational scaled = linf_distance(h) * Rational(h.bucket_count());
      if (scaled > worst) worst = scaled;
    }
    std::cout << "t=" << t << "  pass(tau=1) " << passes << "/200  worst linf*2^t = " << to_double(worst) << "\n";
  }

  // The parameter rule for binary sources: how long an output is guaranteed to balance.
  const HashParams p = choose_t_binary(100, pow_big(2, 60), 3, Rational(1, 2), Variant::binary);
  std::cout << "n=100, |S|=2^60, tau=3, delta=1/2: ell=" << p.ell << " t=" << p.t
            << " entropy loss <= " << to_string(p.entropy_loss) << " bits\n";
}
