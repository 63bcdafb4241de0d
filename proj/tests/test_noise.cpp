#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "rwalk/fractal.hpp"
#include "rwalk/ingest.hpp"
#include "rwalk/noise.hpp"
#include "rwalk/stats.hpp"

using namespace rwalk;

namespace {

NoiseSpec spec(NoiseKind kind, std::size_t n, std::uint64_t stream = 0, Innovation inn = GaussianInnovation{}) {
  return NoiseSpec{kind, inn, n, 5489, stream};
}

}  // namespace

TEST(NoiseSpec, Validation) {
  EXPECT_THROW(white_noise(spec(NoiseKind::white, 1)), std::invalid_argument);
  EXPECT_THROW(white_noise(spec(NoiseKind::white, 10, 0, GaussianInnovation{0.0})), std::invalid_argument);
  EXPECT_THROW(white_noise(spec(NoiseKind::brownian, 10)), std::invalid_argument);
  EXPECT_THROW(brownian_noise(spec(NoiseKind::white, 10)), std::invalid_argument);
  EXPECT_THROW(parse_noise_kind("pink"), std::invalid_argument);
}

TEST(WhiteNoise, LengthAndInnovationRange) {
  const auto w = white_noise(spec(NoiseKind::white, 1001, 3, UniformInnovation{}));
  ASSERT_EQ(w.size(), 1001u);
  for (double v : w.values) {
    ASSERT_GE(v, -1.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(WhiteNoise, SigmaScalesElementwise) {
  const auto a = white_noise(spec(NoiseKind::white, 1000, 7, GaussianInnovation{1.0}));
  const auto b = white_noise(spec(NoiseKind::white, 1000, 7, GaussianInnovation{1e-4}));
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(b.values[i], 1e-4 * a.values[i]);
}

TEST(WhiteNoise, GaussianUsesBothBoxMullerDeviates) {
  auto g = rng::seed(5489, 0);
  const auto [z0, z1] = rng::normal_pair(g);
  const auto w = white_noise(spec(NoiseKind::white, 3));
  EXPECT_EQ(w.values[0], z0);
  EXPECT_EQ(w.values[1], z1);
}

TEST(WhiteNoise, FractalDimensionAtTenThousandPoints) {
  const auto d = sevcik_dimension(white_noise(spec(NoiseKind::white, 10'000)));
  EXPECT_GE(d.d_s, 1.64);
  EXPECT_LE(d.d_s, 1.69);
}

TEST(WhiteNoise, RunsAboutMedianNearHalfPlusOne) {
  double total = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) total += stats::runs_test(white_noise(spec(NoiseKind::white, 1329, k)).view()).n_runs;
  const double expected = 1328.0 / 2.0 + 1.0;  // median point dropped
  EXPECT_NEAR(total / 100.0 / expected, 1.0, 0.05);
}

TEST(BrownianNoise, ZeroInnovationsGiveFlatWalk) {
  const std::vector<double> g(50, 0.0);
  for (double v : brownian_from_innovations(g)) EXPECT_EQ(v, 0.0);
}

TEST(BrownianNoise, IsWalkOverWhiteShiftedByOne) {
  const auto w = white_noise(spec(NoiseKind::white, 2000, 11));
  const auto b = brownian_noise(spec(NoiseKind::brownian, 2000, 11));
  TimeSeries shifted{"w", Date{}, std::vector<double>(w.size(), 0.0)};
  for (std::size_t i = 1; i < w.size(); ++i) shifted.values[i] = w.values[i - 1];
  EXPECT_EQ(reconstruct_walk(shifted, 0.0).values, b.values);
  EXPECT_EQ(b.values[0], 0.0);
}

TEST(BrownianNoise, DifferenceRecoversInnovations) {
  const auto w = white_noise(spec(NoiseKind::white, 2000, 12));
  const auto b = brownian_noise(spec(NoiseKind::brownian, 2000, 12));
  const auto d = difference(b);
  double scale = 0.0;
  for (double v : b.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 1; i < d.size(); ++i) ASSERT_NEAR(d.values[i], w.values[i - 1], 4 * scale * 0x1p-52);

  // integer-valued innovations come back exactly
  std::vector<double> g(500);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(static_cast<int>(i * 7919 % 13) - 6);
  const TimeSeries walk{"b", Date{}, brownian_from_innovations(g)};
  const auto dg = difference(walk);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_EQ(dg.values[i], g[i - 1]);
}

TEST(BrownianNoise, FractalDimensionAtTenThousandPoints) {
  const auto d = sevcik_dimension(brownian_noise(spec(NoiseKind::brownian, 10'000)));
  EXPECT_GE(d.d_s, 1.27);
  EXPECT_LE(d.d_s, 1.38);
}

TEST(CauchyPdf, PeakAndHalfWidth) {
  const double mu = -2.0, lambda = 0.5;
  const double peak = 1.0 / (std::numbers::pi * lambda);
  EXPECT_DOUBLE_EQ(cauchy_pdf(mu, mu, lambda), peak);
  EXPECT_DOUBLE_EQ(cauchy_pdf(mu + lambda, mu, lambda), peak / 2.0);
  EXPECT_DOUBLE_EQ(cauchy_pdf(mu - lambda, mu, lambda), peak / 2.0);
  EXPECT_THROW(cauchy_pdf(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(CauchyPdf, IntegratesToOne) {
  // composite Simpson on decade-wide panels out to 1e6 lambda
  const double lambda = 3.0;
  auto simpson = [&](double a, double b, int m) {
    const double h = (b - a) / m;
    double s = cauchy_pdf(a, 0.0, lambda) + cauchy_pdf(b, 0.0, lambda);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * cauchy_pdf(a + i * h, 0.0, lambda);
    return s * h / 3.0;
  };
  double half = simpson(0.0, lambda, 2000);
  for (double lo = lambda; lo < 1e6 * lambda; lo *= 10.0) half += simpson(lo, lo * 10.0, 20000);
  EXPECT_NEAR(2.0 * half, 1.0, 1e-4);
}

TEST(CauchyCdf, MedianTailAndInversion) {
  EXPECT_DOUBLE_EQ(cauchy_cdf(4.0, 4.0, 2.0), 0.5);
  EXPECT_NEAR(cauchy_cdf(12.706 * 2.0, 0.0, 2.0), 0.975, 1e-4);
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    EXPECT_NEAR(cauchy_cdf(cauchy_quantile(p, 1.0, 0.7), 1.0, 0.7), p, 1e-12);
  }
  EXPECT_THROW(cauchy_cdf(0.0, 0.0, -1.0), std::invalid_argument);
  EXPECT_THROW(cauchy_quantile(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(CauchyCdf, StrictlyIncreasingWithLimits) {
  double prev = -1.0;
  for (double x = -1e3; x <= 1e3; x += 7.3) {
    const double c = cauchy_cdf(x, 0.0, 1.0);
    ASSERT_GT(c, prev);
    prev = c;
  }
  EXPECT_LT(cauchy_cdf(-1e15, 0.0, 1.0), 1e-14);
  EXPECT_GT(cauchy_cdf(1e15, 0.0, 1.0), 1.0 - 1e-14);
}

TEST(CauchyTrace, RunningMeanDoesNotSettle) {
  const double lambda = 1.0;
  int wild = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = cauchy_trace(100'000, 0.0, lambda, seed, 9);
    double sum = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum += x[i];
      worst = std::max(worst, std::abs(sum / static_cast<double>(i + 1)));
    }
    wild += worst > 5.0 * lambda;
  }
  EXPECT_GE(wild, 50);
}
