#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rwalk/noise.hpp"
#include "rwalk/spectral.hpp"

using namespace rwalk;
using namespace rwalk::spectral;

namespace {

std::vector<double> noise(NoiseKind kind, std::size_t n, std::uint64_t stream) {
  return generate_noise({kind, GaussianInnovation{}, n, 5489, stream}).values;
}

std::vector<cplx> dft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx s{};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      s += x[j] * std::polar(1.0, ang);
    }
    out[k] = s;
  }
  return out;
}

Spectrum power_law(std::size_t half, double exponent) {
  Spectrum s;
  s.n_padded = 2 * half;
  for (std::size_t k = 1; k <= half; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(2 * half);
    s.frequencies.push_back(f);
    s.power.push_back(std::pow(f, exponent));
    s.amplitude.push_back(std::sqrt(s.power.back()));
  }
  return s;
}

}  // namespace

TEST(Window, HannAndHammingShapes) {
  const std::size_t n = 9;
  EXPECT_NEAR(window_weight(WindowKind::hann, 0, n), 0.0, 1e-15);
  EXPECT_NEAR(window_weight(WindowKind::hann, 4, n), 1.0, 1e-15);
  EXPECT_NEAR(window_weight(WindowKind::hann, 8, n), 0.0, 1e-15);
  EXPECT_NEAR(window_weight(WindowKind::hamming, 0, n), 0.08, 1e-15);
  EXPECT_NEAR(window_weight(WindowKind::hamming, 4, n), 1.0, 1e-15);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_NEAR(window_weight(WindowKind::hann, k, n), window_weight(WindowKind::hann, n - 1 - k, n), 1e-15);
  }
  EXPECT_EQ(parse_window("hamming"), WindowKind::hamming);
  EXPECT_THROW(parse_window("blackman"), input_error);
}

TEST(Window, RemovesMeanBeforeTapering) {
  const std::vector<double> x(16, 42.0);
  for (double v : apply_window(x, WindowKind::hamming)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(apply_window(std::vector<double>{1, 2, 3}, WindowKind::hann), input_error);
}

TEST(Fft, PadsToPowerOfTwo) {
  EXPECT_EQ(next_pow2(1), 1u);
  EXPECT_EQ(next_pow2(1329), 2048u);
  EXPECT_EQ(next_pow2(1024), 1024u);
  EXPECT_EQ(fft(std::vector<double>(1329, 1.0)).size(), 2048u);
}

TEST(Fft, ImpulseIsFlat) {
  std::vector<double> x(64, 0.0);
  x[0] = 1.0;
  for (const auto& v : fft(x)) {
    EXPECT_NEAR(v.real(), 1.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  }
}

TEST(Fft, SineLandsInOneBin) {
  const std::size_t n = 1024;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = std::sin(2.0 * std::numbers::pi * 8.0 * static_cast<double>(k) / n);
  const auto X = fft(x);
  EXPECT_NEAR(std::abs(X[8]), n / 2.0, 1e-9);
  EXPECT_NEAR(std::abs(X[n - 8]), n / 2.0, 1e-9);
  for (std::size_t k = 0; k < n; ++k) {
    if (k != 8 && k != n - 8) {
      ASSERT_LT(std::abs(X[k]), 1e-9) << k;
    }
  }
}

TEST(Fft, MatchesDirectDft) {
  for (std::size_t n = 1; n <= 64; n *= 2) {
    std::vector<cplx> x(n);
    const auto re = noise(NoiseKind::white, std::max<std::size_t>(n, 2), n);
    const auto im = noise(NoiseKind::white, std::max<std::size_t>(n, 2), n + 100);
    for (std::size_t i = 0; i < n; ++i) x[i] = {re[i], im[i]};
    const auto fast = fft(x);
    const auto slow = dft(x);
    double scale = 0.0;
    for (const auto& v : slow) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < n; ++k) ASSERT_LE(std::abs(fast[k] - slow[k]), 1e-9 * scale) << "n=" << n << " k=" << k;
  }
}

TEST(Fft, Parseval) {
  const auto x = noise(NoiseKind::brownian, 4096, 3);
  const auto X = fft(x);
  double time = 0.0, freq = 0.0;
  for (double v : x) time += v * v;
  for (const auto& v : X) freq += std::norm(v);
  EXPECT_NEAR(freq / 4096.0, time, 1e-9 * time);
}

TEST(Fft, RoundTrip) {
  const auto x = noise(NoiseKind::white, 512, 4);
  std::vector<cplx> a(x.begin(), x.end());
  auto back = ifft(fft(a));
  for (std::size_t i = 0; i < x.size(); ++i) {
    ASSERT_NEAR(back[i].real(), x[i], 1e-12);
    ASSERT_NEAR(back[i].imag(), 0.0, 1e-12);
  }
}

TEST(SpectralDensity, PositiveBinsOnly) {
  const auto X = fft(noise(NoiseKind::white, 1329, 5));
  const auto s = spectral_density(X, 1.0);
  ASSERT_EQ(s.size(), 1024u);
  EXPECT_EQ(s.n_padded, 2048u);
  EXPECT_DOUBLE_EQ(s.frequencies.front(), 1.0 / 2048.0);
  EXPECT_DOUBLE_EQ(s.frequencies.back(), 0.5);
  for (std::size_t i = 0; i < s.size(); ++i) {
    ASSERT_GE(s.power[i], 0.0);
    ASSERT_NEAR(s.amplitude[i] * s.amplitude[i], s.power[i], 1e-9 * std::max(1.0, s.power[i]));
    if (i > 0) {
      ASSERT_GT(s.frequencies[i], s.frequencies[i - 1]);
    }
  }
}

TEST(SpectralDensity, RejectsNonRealTransformAndBadSizes) {
  std::vector<cplx> x(8, cplx{0.0, 0.0});
  x[1] = {1.0, 1.0};
  EXPECT_THROW(spectral_density(x), input_error);
  EXPECT_THROW(spectral_density(std::vector<cplx>(6)), input_error);
  EXPECT_THROW(spectral_density(std::vector<cplx>(8), 0.0), input_error);
}

TEST(SpectralDensity, SinePeakStandsOut) {
  const std::size_t n = 1024;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = std::sin(2.0 * std::numbers::pi * 8.0 * static_cast<double>(k) / n);
  const auto s = spectral_density(fft(x));
  auto sorted = s.power;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double med = sorted[sorted.size() / 2];
  EXPECT_EQ(std::max_element(s.power.begin(), s.power.end()) - s.power.begin(), 7);
  EXPECT_GE(s.power[7], 100.0 * med);
}

TEST(LogLogSlope, ExactPowerLaw) {
  const auto s = power_law(4096, -2.0);
  const auto f = loglog_slope(s);
  EXPECT_NEAR(f.slope, -2.0, 1e-6);
  EXPECT_NEAR(f.ci_low, -2.0, 1e-6);
  EXPECT_NEAR(f.ci_high, -2.0, 1e-6);
  EXPECT_LE(f.f_high, 0.25 * (1.0 + 1e-9));
  EXPECT_EQ(f.bins_used, 2048u);
}

TEST(LogLogSlope, TooFewBins) {
  EXPECT_THROW(loglog_slope(power_law(8, -2.0)), input_error);
  EXPECT_NO_THROW(loglog_slope(power_law(16, -2.0)));
}

TEST(LogLogSlope, WhiteNoiseIsFlat) {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto a = analyze_spectrum(noise(NoiseKind::white, 10'000, k));
    EXPECT_GE(a.fit.slope, -0.15);
    EXPECT_LE(a.fit.slope, 0.15);
  }
}

TEST(LogLogSlope, BrownianFallsAsInverseSquare) {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto a = analyze_spectrum(noise(NoiseKind::brownian, 10'000, k));
    EXPECT_GE(a.fit.slope, -2.3);
    EXPECT_LE(a.fit.slope, -1.7);
    EXPECT_LE(a.peak_ratio, 10.0);
    EXPECT_LE(a.fit.ci_low, a.fit.slope);
    EXPECT_GE(a.fit.ci_high, a.fit.slope);
  }
}

TEST(LogLogSlope, HammingAgreesWithHann) {
  const auto x = noise(NoiseKind::brownian, 10'000, 21);
  const auto a = analyze_spectrum(x, WindowKind::hann), b = analyze_spectrum(x, WindowKind::hamming);
  EXPECT_NEAR(a.fit.slope, b.fit.slope, 0.3);
  EXPECT_EQ(b.spectrum.window, WindowKind::hamming);
}

TEST(PeakRatio, PeriodicComponentIsFlagged) {
  auto x = noise(NoiseKind::white, 4096, 22);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += 3.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / 7.0);
  EXPECT_GT(analyze_spectrum(x).peak_ratio, 10.0);
}
