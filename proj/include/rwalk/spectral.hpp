#ifndef RWALK_SPECTRAL_HPP
#define RWALK_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rwalk/error.hpp"
#include "rwalk/series.hpp"
#include "rwalk/stats/regression.hpp"

namespace rwalk::spectral {

using cplx = std::complex<double>;

enum class WindowKind { hann, hamming };

inline std::string_view to_string(WindowKind k) { return k == WindowKind::hann ? "hann" : "hamming"; }

inline WindowKind parse_window(std::string_view s) {
  if (s == "hann") return WindowKind::hann;
  if (s == "hamming") return WindowKind::hamming;
  throw input_error("unknown window '" + std::string(s) + "'");
}

/// Raised-cosine weight at k of n: a - (1 - a) cos(2 pi k / (n - 1)).
inline double window_weight(WindowKind kind, std::size_t k, std::size_t n) {
  const double a = kind == WindowKind::hann ? 0.5 : 0.54;
  return a - (1.0 - a) * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
}

/// Removes the mean, then tapers with the chosen window.
inline std::vector<double> apply_window(std::span<const double> x, WindowKind kind) {
  if (x.size() < 4) throw input_error("apply_window: need at least 4 points");
  if (has_missing(x)) throw input_error("apply_window: series has missing values");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - mean) * window_weight(kind, k, x.size());
  return out;
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// In-place iterative radix-2 decimation-in-time transform; size must be a power of two.
inline void fft_inplace(std::vector<cplx>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // direct twiddle, no running product
        const cplx w = std::polar(1.0, ang * static_cast<double>(k));
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

/// Forward transform of a real series, zero-padded to the next power of two.
inline std::vector<cplx> fft(std::span<const double> x) {
  if (x.empty()) throw input_error("fft: empty series");
  std::vector<cplx> a(next_pow2(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
  fft_inplace(a);
  return a;
}

inline std::vector<cplx> fft(std::vector<cplx> a) {
  if (a.empty()) throw input_error("fft: empty series");
  a.resize(next_pow2(a.size()));
  fft_inplace(a);
  return a;
}

inline std::vector<cplx> ifft(std::vector<cplx> a) {
  fft_inplace(a, true);
  return a;
}

struct Spectrum {
  std::vector<double> frequencies;  // cycles per day, bins 1 .. n_padded/2
  std::vector<double> amplitude;    // |X_k|
  std::vector<double> power;        // |X_k|^2
  double dc_power = 0.0;
  WindowKind window = WindowKind::hann;
  std::size_t n_padded = 0;
  std::size_t n_input = 0;
  double dt = 1.0;

  std::size_t size() const { return frequencies.size(); }
  double nyquist() const { return 0.5 / dt; }
};

/// Positive-frequency half of a real signal's transform. Throws if the input
/// is not conjugate-symmetric, i.e. did not come from real data.
inline Spectrum spectral_density(std::span<const cplx> x, double dt = 1.0) {
  const std::size_t n = x.size();
  if (n < 2 || (n & (n - 1)) != 0) throw input_error("spectral_density: size must be a power of two >= 2");
  if (!(dt > 0.0)) throw input_error("spectral_density: dt must be > 0");
  double scale = 0.0;
  for (const auto& v : x) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs(x[k] - std::conj(x[n - k])) > 1e-9 * std::max(scale, 1.0)) {
      throw input_error("spectral_density: transform is not conjugate-symmetric");
    }
  }
  Spectrum s;
  s.n_padded = n;
  s.dt = dt;
  s.dc_power = std::norm(x[0]);
  const std::size_t half = n / 2;
  s.frequencies.resize(half);
  s.amplitude.resize(half);
  s.power.resize(half);
  for (std::size_t k = 1; k <= half; ++k) {
    s.frequencies[k - 1] = static_cast<double>(k) / (static_cast<double>(n) * dt);
    s.power[k - 1] = std::norm(x[k]);
    s.amplitude[k - 1] = std::sqrt(s.power[k - 1]);
  }
  return s;
}

struct SlopeFit {
  double slope = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double intercept = 0.0;  // log10 power at log10 f = 0
  std::size_t bins_used = 0;
  double f_low = 0.0;
  double f_high = 0.0;

  double fitted_log10(double f) const { return intercept + slope * std::log10(f); }
};

struct SlopeOptions {
  double high_cut = 0.5;  // keep f <= high_cut * Nyquist
  std::size_t min_bins = 8;
};

/// Bins that enter the log-log fit: not DC, not Nyquist, not above the high cut, power > 0.
inline std::vector<std::size_t> fit_bins(const Spectrum& s, const SlopeOptions& opt = {}) {
  std::vector<std::size_t> idx;
  const double cut = opt.high_cut * s.nyquist() * (1.0 + 1e-12);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s.frequencies[i] <= cut && s.power[i] > 0.0) idx.push_back(i);
  }
  return idx;
}

/// Theil fit of log10(power) against log10(f).
inline SlopeFit loglog_slope(const Spectrum& s, const SlopeOptions& opt = {}) {
  const auto idx = fit_bins(s, opt);
  if (idx.size() < opt.min_bins) {
    throw input_error("loglog_slope: " + std::to_string(idx.size()) + " usable bins, need " +
                      std::to_string(opt.min_bins));
  }
  std::vector<double> lx, ly;
  lx.reserve(idx.size());
  ly.reserve(idx.size());
  for (auto i : idx) {
    lx.push_back(std::log10(s.frequencies[i]));
    ly.push_back(std::log10(s.power[i]));
  }
  const auto t = stats::theil_fit(lx, ly);
  SlopeFit f;
  f.slope = t.beta.estimate;
  f.ci_low = t.beta.low;
  f.ci_high = t.beta.high;
  f.intercept = t.alpha.estimate;
  f.bins_used = idx.size();
  f.f_low = s.frequencies[idx.front()];
  f.f_high = s.frequencies[idx.back()];
  return f;
}

/// Largest ratio of locally averaged power (5-bin moving mean) to the fitted
/// mean level over the fitted bins. The Theil line tracks the median of log
/// power; for exponentially distributed ordinates the mean is that divided by ln 2.
inline double peak_ratio(const Spectrum& s, const SlopeFit& fit, const SlopeOptions& opt = {}) {
  const auto idx = fit_bins(s, opt);
  if (idx.empty()) return 0.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const std::size_t lo = j >= 2 ? j - 2 : 0;
    const std::size_t hi = std::min(idx.size() - 1, j + 2);
    double sum = 0.0;
    for (std::size_t q = lo; q <= hi; ++q) sum += s.power[idx[q]];
    const double avg = sum / static_cast<double>(hi - lo + 1);
    const double level = std::pow(10.0, fit.fitted_log10(s.frequencies[idx[j]])) / std::numbers::ln2;
    worst = std::max(worst, avg / level);
  }
  return worst;
}

struct SpectrumAnalysis {
  Spectrum spectrum;
  SlopeFit fit;
  double peak_ratio = 0.0;
};

/// Window, transform and fit in one call.
inline SpectrumAnalysis analyze_spectrum(std::span<const double> x, WindowKind window = WindowKind::hann,
                                         double dt = 1.0, const SlopeOptions& opt = {}) {
  const auto w = apply_window(x, window);
  const auto X = fft(std::span<const double>(w));
  SpectrumAnalysis a;
  a.spectrum = spectral_density(X, dt);
  a.spectrum.window = window;
  a.spectrum.n_input = x.size();
  a.fit = loglog_slope(a.spectrum, opt);
  a.peak_ratio = spectral::peak_ratio(a.spectrum, a.fit, opt);
  return a;
}

}  // namespace rwalk::spectral

#endif  // RWALK_SPECTRAL_HPP
