#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "antagonistic/numeric.hpp"
#include "antagonistic/random.hpp"

namespace antag {
namespace {

TEST(Stream, SameKeySameSequence) {
  Stream a = Stream::for_entry(42, 3, 17);
  Stream b = Stream::for_entry(42, 3, 17);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  EXPECT_EQ(a.position(), 100u);
}

TEST(Stream, DistinctEntriesDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t e = 0; e < 1000; ++e) firsts.insert(Stream::for_entry(1, 0, e)());
  for (std::uint64_t m = 1; m < 100; ++m) firsts.insert(Stream::for_entry(1, m, 0)());
  EXPECT_EQ(firsts.size(), 1099u);
}

TEST(Stream, DeriveSeedIsInjectiveOnSmallRange) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 10000; ++i) seeds.insert(derive_seed(0, i));
  EXPECT_EQ(seeds.size(), 10000u);
  EXPECT_NE(derive_seed(0, 1), derive_seed(1, 0));
}

TEST(Distributions, UniformRangeAndMoments) {
  Stream s(7);
  CompensatedSum sum, sq;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(s);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum.value() / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sq.value() / n, 1.0 / 3, 0.005);
  for (int i = 0; i < 1000; ++i) {
    const double v = uniform(s, -10.0, -2.0);
    ASSERT_GE(v, -10.0);
    ASSERT_LT(v, -2.0);
    ASSERT_GT(uniform_open01(s), 0.0);
  }
}

TEST(Distributions, NormalMoments) {
  Stream s(11);
  CompensatedSum m1, m2, m4;
  constexpr int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double x = standard_normal(s);
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  EXPECT_NEAR(m1.value() / n, 0.0, 4 / std::sqrt(double(n)));
  EXPECT_NEAR(m2.value() / n, 1.0, 4 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4.value() / n, 3.0, 4 * std::sqrt(96.0 / n));
}

TEST(Distributions, SignIsFair) {
  Stream s(5);
  int plus = 0;
  for (int i = 0; i < 100000; ++i) {
    const double r = random_sign(s);
    ASSERT_TRUE(r == 1.0 || r == -1.0);
    plus += r > 0;
  }
  EXPECT_NEAR(plus, 50000, 4 * std::sqrt(25000.0));
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  CompensatedSum s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  EXPECT_EQ(s.value(), 1.0);
}

TEST(ParallelFor, CoversEveryIndexOnceAndRethrows) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace antag
