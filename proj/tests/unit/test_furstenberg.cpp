#include <gtest/gtest.h>

#include "kakeya_hash/furstenberg/furstenberg.hpp"

using namespace kakeya_hash;

namespace {

const Subspace& first_line(const std::vector<Subspace>& subs) { return subs.front(); }

}  // namespace

TEST(IsRich, Examples) {
  auto f2 = Field::make(2);
  const auto lines = enumerate_flats(f2, 2, 1);
  for (const auto& R : lines) {
    EXPECT_TRUE(is_rich(R, PointSet(f2, 2), 0));
    EXPECT_TRUE(is_rich(R, PointSet::full(f2, 2), 2));
  }
  const Subspace d = Subspace::span(Matrix::from_rows(f2, {{1, 0}}));
  EXPECT_FALSE(is_rich(Flat(d, Vec{0, 0}), PointSet(f2, 2, {{0, 0}}), 2));
}

TEST(RichDirectionFraction, Examples) {
  auto f2 = Field::make(2);
  EXPECT_EQ(rich_direction_fraction(PointSet::full(f2, 2), 1, 2), Rational(1));
  const PointSet line(f2, 2, {{0, 0}, {1, 1}});
  EXPECT_EQ(rich_direction_fraction(line, 1, 2), Rational(1, 3));
  EXPECT_EQ(rich_direction_fraction(PointSet(f2, 2), 1, 1), Rational(0));
  EXPECT_TRUE(is_furstenberg(line, {1, 2, Rational(1, 3), std::nullopt}));
  EXPECT_FALSE(is_furstenberg(line, {1, 2, Rational(1, 2), std::nullopt}));
  EXPECT_TRUE(is_furstenberg(PointSet(f2, 2), {1, 2, 0, std::nullopt}));
  (void)first_line;
}

TEST(RichDirectionFraction, KakeyaFullSpace) {
  for (std::uint32_t q : {2U, 3U}) {
    auto f = Field::make(q);
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t k = 1; k <= n; ++k) {
        const auto m = checked_pow(q, k);
        EXPECT_TRUE(is_furstenberg(PointSet::full(f, n), {k, m, 1, std::nullopt}));
      }
  }
}

TEST(RichDirectionFraction, MonotoneInMAndUnderInclusion) {
  auto f3 = Field::make(3);
  CounterRng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const PointSet K = PointSet::random(rng, f3, 2, rng.below(10));
    Rational prev = 2;
    for (std::uint64_t m = 0; m <= 4; ++m) {
      const Rational now = rich_direction_fraction(K, 1, m);
      EXPECT_LE(now, prev);
      prev = now;
    }
    std::vector<Vec> bigger = K.points();
    bigger.push_back(decode(rng.below(9), 2, 3));
    const PointSet K2(f3, 2, bigger);
    for (std::uint64_t m = 0; m <= 3; ++m) EXPECT_LE(rich_direction_fraction(K, 1, m), rich_direction_fraction(K2, 1, m));
  }
}

TEST(RichDirectionFraction, UnionOfOneFlatPerDirectionIsSmallAndFurstenberg) {
  for (std::uint32_t q : {2U, 3U}) {
    auto f = Field::make(q);
    for (std::size_t n = 2; n <= 3; ++n) {
      CounterRng rng(n * 10 + q);
      std::vector<Vec> pts;
      std::size_t dirs = 0;
      for (const auto& A : enumerate_subspaces(f, n, 1)) {
        ++dirs;
        const Flat F(A, decode(rng.below(checked_pow(q, n)), n, q));
        for (const auto& p : F.points()) pts.push_back(p);
      }
      const PointSet K(f, n, pts);
      EXPECT_LE(K.size(), q * dirs);
      EXPECT_EQ(rich_direction_fraction(K, 1, q), Rational(1));
    }
  }
}

TEST(FlatMasks, AgreesWithSetPath) {
  auto f3 = Field::make(3);
  const FlatMasks table(f3, 2, 1);
  EXPECT_EQ(table.direction_count(), 4U);
  CounterRng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t mask = rng.below(512);
    const PointSet K = mask_to_set(f3, 2, mask);
    for (std::uint64_t m = 0; m <= 3; ++m) {
      EXPECT_EQ(Rational(static_cast<std::int64_t>(table.rich_directions(mask, m)), 4), rich_direction_fraction(K, 1, m));
    }
  }
}

TEST(LowerBound, Examples) {
  EXPECT_EQ(lower_bound(2, 3, 2, 1, 1), Rational(81, 16));
  EXPECT_EQ(lower_bound(2, 3, 2, 1, 0), Rational(0));
  EXPECT_EQ(lower_bound(1, 2, 1, 1, 1), Rational(1));
  EXPECT_THROW(lower_bound(2, 3, 2, Rational(3, 2), 1), std::invalid_argument);
  EXPECT_THROW(lower_bound(2, 3, 2, 1, -1), std::invalid_argument);
}

TEST(LowerBound, MonotoneInParameters) {
  const std::vector<Rational> grid = {0, Rational(1, 4), Rational(1, 2), Rational(3, 4), 1};
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    EXPECT_LE(lower_bound(3, 3, 2, grid[i], 1), lower_bound(3, 3, 2, grid[i + 1], 1));
    EXPECT_LE(lower_bound(3, 3, 2, 1, grid[i]), lower_bound(3, 3, 2, 1, grid[i + 1]));
  }
  for (std::uint32_t q : {2U, 3U, 5U, 7U}) EXPECT_LE(lower_bound(3, q, 2, Rational(1, 2), 1), lower_bound(3, q + 1, 2, Rational(1, 2), 1));
}

TEST(FurstenbergQuery, FromGammaUsesCeiling) {
  const auto q = FurstenbergQuery::from_gamma(3, 2, Rational(1, 4), 1);
  EXPECT_EQ(q.m, 3U);  // ceil(9/4)
  EXPECT_EQ(FurstenbergQuery::from_gamma(2, 2, Rational(3, 4), 1).m, 3U);
  FurstenbergQuery bad{2, 5, 1, Rational(1, 4)};
  EXPECT_THROW(bad.validate(3), std::invalid_argument);
  EXPECT_THROW(FurstenbergQuery::from_gamma(3, 2, 2, 1), std::invalid_argument);
}

TEST(LowerBoundAudit, SmallSpacesPass) {
  const std::vector<Rational> grid = {Rational(1, 4), Rational(1, 2), Rational(3, 4), 1};
  struct Case {
    std::size_t n;
    std::uint32_t q;
    std::size_t k;
    std::uint64_t subsets;
  };
  for (const Case c : {Case{2, 2, 1, 16}, Case{2, 2, 2, 16}, Case{3, 2, 2, 256}, Case{2, 3, 1, 512}, Case{2, 3, 2, 512}}) {
    const auto rep = audit_lower_bound_exhaustive(c.n, c.q, c.k, grid, grid);
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_EQ(rep.subsets_checked, c.subsets);
    EXPECT_TRUE(rep.pass()) << "n=" << c.n << " q=" << c.q << " k=" << c.k;
    EXPECT_GT(rep.furstenberg_instances, 0U);
  }
  // q^n = 16 switches to sampling; 27 is refused
  const auto sampled = audit_lower_bound_exhaustive(4, 2, 2, grid, grid, 7, 300);
  EXPECT_FALSE(sampled.exhaustive);
  EXPECT_EQ(sampled.subsets_checked, 300U);
  EXPECT_TRUE(sampled.pass());
  EXPECT_THROW(audit_lower_bound_exhaustive(3, 3, 2, grid, grid), BudgetExceeded);
}

TEST(LowerBoundAudit, PlaneKakeyaNeedsWholeSpace) {
  // in F_3^2 the only 2-flat is the plane, so (2, 9, 1) forces K = F_3^2
  const auto r = min_furstenberg_size(2, 3, 2, 9, 1, SearchMode::exhaustive);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->size, 9U);
  EXPECT_GE(Rational(9), lower_bound(2, 3, 2, 1, 1));
}

TEST(MinFurstenbergSize, Examples) {
  const auto r = min_furstenberg_size(2, 2, 1, 2, 1, SearchMode::exhaustive);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->size, 3U);
  EXPECT_TRUE(is_furstenberg(r->witness, {1, 2, 1, std::nullopt}));
  EXPECT_EQ(min_furstenberg_size(2, 2, 1, 0, 1, SearchMode::exhaustive)->size, 0U);
  EXPECT_EQ(min_furstenberg_size(2, 2, 1, 2, 0, SearchMode::exhaustive)->size, 0U);
  EXPECT_FALSE(min_furstenberg_size(2, 2, 1, 3, 1, SearchMode::exhaustive).has_value());
  EXPECT_EQ(min_furstenberg_size(2, 3, 1, 3, 1, SearchMode::exhaustive)->size, 7U);
  EXPECT_THROW(min_furstenberg_size(2, 5, 1, 3, 1, SearchMode::exhaustive), BudgetExceeded);
}

TEST(MinFurstenbergSize, GreedyIsAnUpperBound) {
  for (auto [n, q] : {std::pair<std::size_t, std::uint32_t>{2, 2}, {2, 3}, {3, 2}}) {
    for (std::uint64_t m = 1; m <= q; ++m) {
      for (const Rational beta : {Rational(1, 2), Rational(1)}) {
        const auto ex = min_furstenberg_size(n, q, 1, m, beta, SearchMode::exhaustive);
        const auto gr = min_furstenberg_size(n, q, 1, m, beta, SearchMode::greedy);
        ASSERT_TRUE(ex && gr);
        EXPECT_GE(gr->size, ex->size);
        EXPECT_EQ(gr->witness.size(), gr->size);
        EXPECT_TRUE(is_furstenberg(gr->witness, {1, m, beta, std::nullopt}));
      }
    }
  }
  // beyond exhaustive reach the greedy set is still Furstenberg
  const auto big = min_furstenberg_size(2, 7, 1, 7, 1, SearchMode::greedy);
  ASSERT_TRUE(big);
  EXPECT_TRUE(is_furstenberg(big->witness, {1, 7, 1, std::nullopt}));
}
