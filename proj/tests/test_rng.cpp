#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "rwalk/rng.hpp"
#include "rwalk/stats.hpp"

using namespace rwalk;

TEST(Mt19937, ReferenceFirstOutputForSeed5489) {
  auto g = rng::seed(5489, 0);
  EXPECT_EQ(g.next_u32(), 3499211612u);
}

TEST(Mt19937, MatchesStdMt19937ForScalarSeeds) {
  for (std::uint32_t s : {5489u, 1u, 42u, 4294967295u}) {
    auto g = rng::seed(s, 0);
    std::mt19937 oracle(s);
    for (int i = 0; i < 2000; ++i) ASSERT_EQ(g.next_u32(), oracle()) << "seed " << s << " draw " << i;
  }
}

TEST(Mt19937, InitByArrayReferenceVector) {
  // first outputs of the reference mt19937ar.c driver, key {0x123, 0x234, 0x345, 0x456}
  const std::array<std::uint32_t, 4> key{0x123, 0x234, 0x345, 0x456};
  rng::Mt19937 mt{std::span<const std::uint32_t>(key)};
  const std::array<std::uint32_t, 5> expected{1067595299u, 955945823u, 477289528u, 4107218783u, 4228976476u};
  for (auto e : expected) EXPECT_EQ(mt.next_u32(), e);
}

TEST(Seed, SameSeedAndStreamGiveSameSequence) {
  auto a = rng::seed(77, 3);
  auto b = rng::seed(77, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u32(), b.next_u32());
  EXPECT_EQ(a.seed_record(), (rng::SeedRecord{77, 3}));
}

TEST(Seed, DistinctStreamsDiffer) {
  auto a = rng::seed(77, 0);
  auto b = rng::seed(77, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a.next_u32() == b.next_u32();
  EXPECT_LT(equal, 3);
}

TEST(Seed, SixtyFourBitMasterSeedsAreDistinct) {
  auto a = rng::seed(0x100000000ull, 0);
  auto b = rng::seed(0x200000000ull, 0);
  auto c = rng::seed(0, 0);
  const auto x = a.next_u32(), y = b.next_u32(), z = c.next_u32();
  EXPECT_NE(x, y);
  EXPECT_NE(x, z);
}

TEST(Seed, IndexStaysInRange) {
  auto g = rng::seed(9, 2);
  for (int i = 0; i < 2000; ++i) {
    g.next_u32();
    ASSERT_LE(g.engine().index(), rng::Mt19937::state_size);
  }
}

TEST(Uniform01, RangeAndMean) {
  auto g = rng::seed(1234, 0);
  double sum = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double u = rng::uniform01(g);
    ASSERT_GE(u, 0.0);
    ASSERT_LE(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.002);
}

TEST(Uniform01, EmpiricalCdfCloseToUniform) {
  auto g = rng::seed(99, 5);
  std::vector<double> u(100'000);
  for (auto& v : u) v = rng::uniform01(g);
  const auto cdf = stats::empirical_cdf(u);
  const auto& s = cdf.sorted();
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    d = std::max({d, (static_cast<double>(i) + 1) / n - s[i], s[i] - static_cast<double>(i) / n});
  }
  EXPECT_LT(d, 0.01);
}

TEST(Uniform01, ConsumesTwoWords) {
  auto g = rng::seed(5489, 0);
  rng::uniform01(g);
  std::mt19937 oracle(5489);
  oracle.discard(2);
  EXPECT_EQ(g.next_u32(), oracle());
}

TEST(UniformAb, RejectsEmptyInterval) {
  auto g = rng::seed(1, 0);
  EXPECT_THROW(rng::uniform_ab(g, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(rng::uniform_ab(g, 2.0, -1.0), std::invalid_argument);
}

TEST(UniformAb, MinusOneToOne) {
  auto g = rng::seed(2024, 0);
  double sum = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double v = rng::uniform_ab(g, -1.0, 1.0);
    ASSERT_GE(v, -1.0);
    ASSERT_LE(v, 1.0);
    sum += v;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.004);
}

TEST(UniformAb, UnitIntervalEqualsUniform01) {
  auto a = rng::seed(5, 5);
  auto b = rng::seed(5, 5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rng::uniform_ab(a, 0.0, 1.0), rng::uniform01(b));
}

TEST(BoxMuller, AnalyticPoint) {
  const auto [z0, z1] = rng::box_muller(0.25, std::exp(-0.5));
  EXPECT_NEAR(z0, 1.0, 1e-15);
  EXPECT_NEAR(z1, 0.0, 1e-15);
}

TEST(NormalPair, UnitVariance) {
  auto g = rng::seed(31337, 0);
  double s = 0.0, ss = 0.0;
  const int pairs = 500'000;
  for (int i = 0; i < pairs; ++i) {
    const auto [a, b] = rng::normal_pair(g);
    s += a + b;
    ss += a * a + b * b;
  }
  const double n = 2.0 * pairs;
  const double mean = s / n;
  EXPECT_NEAR(ss / n - mean * mean, 1.0, 0.01);
}

TEST(NormalPair, ConsumesFourWordsPerCall) {
  auto g = rng::seed(5489, 0);
  rng::normal_pair(g);
  std::mt19937 oracle(5489);
  oracle.discard(4);
  EXPECT_EQ(g.next_u32(), oracle());
}

TEST(NormalPair, JarqueBeraRarelyRejects) {
  int accepted = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    auto g = rng::seed(777, trial);
    std::vector<double> z(10'000);
    for (std::size_t i = 0; i < z.size(); i += 2) std::tie(z[i], z[i + 1]) = rng::normal_pair(g);
    accepted += stats::jarque_bera(z).p > 0.01;
  }
  EXPECT_GE(accepted, 95);
}

TEST(Cauchy, MedianInputReturnsLocation) {
  EXPECT_EQ(rng::cauchy_from_uniform(0.5, 3.25, 2.0), 3.25);
}

TEST(Cauchy, RejectsNonPositiveScale) {
  auto g = rng::seed(1, 0);
  EXPECT_THROW(rng::cauchy_sample(g, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(rng::cauchy_sample(g, 0.0, -1.0), std::invalid_argument);
}

TEST(Cauchy, CentralSpanAndMedian) {
  const double mu = 1.5, lambda = 2.0;
  auto g = rng::seed(4242, 1);
  std::vector<double> x(100'000);
  for (auto& v : x) v = rng::cauchy_sample(g, mu, lambda);
  std::sort(x.begin(), x.end());
  const auto q = [&](double p) { return x[static_cast<std::size_t>(p * (x.size() - 1))]; };
  EXPECT_NEAR((q(0.975) - q(0.025)) / (25.412 * lambda), 1.0, 0.03);
  EXPECT_NEAR(stats::median(std::span<const double>(x)), mu, 0.02 * lambda);
}

TEST(Poisson, MeanMatchesRate) {
  auto g = rng::seed(8, 0);
  double s = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) s += rng::poisson_sample(g, 1.2);
  EXPECT_NEAR(s / n, 1.2, 0.01);
  EXPECT_THROW(rng::poisson_sample(g, -1.0), std::invalid_argument);
}

TEST(GeneratorState, WorksAsStdUniformRandomBitGenerator) {
  auto a = rng::seed(3, 0);
  auto b = rng::seed(3, 0);
  std::vector<int> x(50), y(50);
  std::iota(x.begin(), x.end(), 0);
  std::iota(y.begin(), y.end(), 0);
  std::shuffle(x.begin(), x.end(), a);
  std::shuffle(y.begin(), y.end(), b);
  EXPECT_EQ(x, y);
  EXPECT_FALSE(std::is_sorted(x.begin(), x.end()));
}
