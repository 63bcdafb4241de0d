#ifndef RWALK_FRACTAL_HPP
#define RWALK_FRACTAL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "rwalk/error.hpp"
#include "rwalk/noise.hpp"
#include "rwalk/series.hpp"

namespace rwalk {

/// Waveform mapped into [0,1]x[0,1]: x* = i/(n-1), y* = (y - min)/(max - min).
struct UnitSquareCurve {
  std::vector<double> xstar;
  std::vector<double> ystar;
  std::vector<double> segments;  // length of segment i, between points i and i+1
  double length = 0.0;
  bool degenerate = false;       // constant input; ystar is all zero

  std::size_t size() const { return xstar.size(); }
};

inline UnitSquareCurve embed_unit_square(std::span<const double> y) {
  if (y.size() < 2) throw input_error("embed_unit_square: need at least 2 points");
  if (has_missing(y)) throw input_error("embed_unit_square: series has missing values");
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double ymin = *lo;
  const double range = *hi - *lo;
  const std::size_t n = y.size();

  UnitSquareCurve c;
  c.degenerate = !(range > 0.0);
  c.xstar.resize(n);
  c.ystar.resize(n);
  c.segments.resize(n - 1);
  const double xmax = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    c.xstar[i] = static_cast<double>(i) / xmax;
    c.ystar[i] = c.degenerate ? 0.0 : (y[i] - ymin) / range;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    c.segments[i] = std::hypot(c.xstar[i + 1] - c.xstar[i], c.ystar[i + 1] - c.ystar[i]);
    c.length += c.segments[i];
  }
  return c;
}

inline UnitSquareCurve embed_unit_square(const TimeSeries& s) { return embed_unit_square(s.view()); }

struct FractalEstimate {
  double d_s = 1.0;
  double var_ds = 0.0;
  std::size_t n = 0;
  std::size_t n_prime = 0;
  double length = 0.0;
  bool degenerate = false;

  double sd() const { return std::sqrt(var_ds); }
};

/// D_s = 1 + (ln L - ln 2) / ln(2N'), N' = n - 1, with
/// var(D_s) = N' / (L^2 ln^2(2N')) * sum_i (l_i - mean l)^2 / N' over segment lengths l_i.
/// A constant series is a line: d_s = 1, var = 0, flagged degenerate.
inline FractalEstimate sevcik_dimension(const UnitSquareCurve& c) {
  FractalEstimate e;
  e.n = c.size();
  e.n_prime = e.n - 1;
  e.length = c.length;
  if (c.degenerate) {
    e.degenerate = true;
    return e;
  }
  const double np = static_cast<double>(e.n_prime);
  const double log2n = std::log(2.0 * np);
  e.d_s = 1.0 + (std::log(c.length) - std::log(2.0)) / log2n;

  const double mean_seg = c.length / np;
  double ss = 0.0;
  for (double l : c.segments) ss += (l - mean_seg) * (l - mean_seg);
  e.var_ds = np / (c.length * c.length * log2n * log2n) * (ss / np);
  return e;
}

inline FractalEstimate sevcik_dimension(std::span<const double> y) {
  return sevcik_dimension(embed_unit_square(y));
}

inline FractalEstimate sevcik_dimension(const TimeSeries& s) { return sevcik_dimension(s.view()); }

struct CalibrationOptions {
  std::uint64_t seed = 5489;
  std::uint64_t stream_base = 0;
  unsigned threads = 1;  // 0: hardware concurrency
  Innovation innovation = GaussianInnovation{};
};

struct CalibrationEnsemble {
  NoiseKind kind = NoiseKind::white;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<FractalEstimate> traces;
  double mean_ds = 0.0;
  double var_between = 0.0;  // M - 1 denominator
  double var_total = 0.0;    // var_between + mean per-trace variance
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  Innovation innovation = GaussianInnovation{};
};

/// Fills mean_ds / var_between / var_total from traces.
inline void summarize(CalibrationEnsemble& e) {
  const std::size_t m = e.traces.size();
  if (m < 2) throw input_error("calibration: need at least 2 traces");
  e.m = m;
  double sum = 0.0, sum_var = 0.0;
  for (const auto& t : e.traces) {
    sum += t.d_s;
    sum_var += t.var_ds;
  }
  e.mean_ds = sum / static_cast<double>(m);
  double ss = 0.0;
  for (const auto& t : e.traces) ss += (t.d_s - e.mean_ds) * (t.d_s - e.mean_ds);
  e.var_between = ss / static_cast<double>(m - 1);
  e.var_total = e.var_between + sum_var / static_cast<double>(m);
}

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Ensemble over explicit stream ids; trace k is generated from streams[k] only,
/// so the result does not depend on the worker count. Repeated ids are allowed.
inline CalibrationEnsemble calibrate_streams(NoiseKind kind, std::span<const std::uint64_t> streams, std::size_t n,
                                             const CalibrationOptions& opt = {}) {
  if (streams.size() < 2) throw input_error("calibrate: M must be >= 2");
  if (n < 3) throw input_error("calibrate: N must be >= 3");
  CalibrationEnsemble e;
  e.kind = kind;
  e.n = n;
  e.seed = opt.seed;
  e.stream_base = opt.stream_base;
  e.innovation = opt.innovation;
  e.traces.resize(streams.size());
  detail::parallel_for(streams.size(), opt.threads, [&](std::size_t k) {
    const NoiseSpec spec{kind, opt.innovation, n, opt.seed, streams[k]};
    e.traces[k] = sevcik_dimension(generate_noise(spec));
  });
  summarize(e);
  return e;
}

/// M traces of length N on streams stream_base, stream_base + 1, ...
inline CalibrationEnsemble calibrate(NoiseKind kind, std::size_t m, std::size_t n, const CalibrationOptions& opt = {}) {
  std::vector<std::uint64_t> streams(m);
  std::iota(streams.begin(), streams.end(), opt.stream_base);
  return calibrate_streams(kind, streams, n, opt);
}

/// Mean and variance of D_s for one side of a comparison.
struct DsSummary {
  std::string label;
  double mean = 0.0;
  double variance = 0.0;
  std::size_t n = 0;

  static DsSummary of(const FractalEstimate& e, std::string label = {}) {
    return {std::move(label), e.d_s, e.var_ds, e.n};
  }
  static DsSummary of(const CalibrationEnsemble& e, std::string label = {}) {
    if (label.empty()) label = std::string(to_string(e.kind));
    return {std::move(label), e.mean_ds, e.var_total, e.n};
  }
};

enum class Verdict {
  significant,  // lambda above both sqrt(8/3) and lambda*(alpha)
  undecided,    // lambda above sqrt(8/3) but below lambda*(alpha)
  bounded,      // lambda <= sqrt(8/3): only 1/6 <= P <= 1 is known
};

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::significant: return "significant";
    case Verdict::undecided: return "undecided";
    case Verdict::bounded: return "bounded";
  }
  return "?";
}

inline const double vp_lambda_min = std::sqrt(8.0 / 3.0);

/// One-tailed Vysochanskij-Petunin threshold: 4/(9 lambda^2) = alpha.
inline double vp_lambda_star(double alpha) { return std::sqrt(2.0 / (9.0 * alpha)); }

struct SignificanceResult {
  double delta = 0.0;
  double s_delta = 0.0;
  double lambda = 0.0;
  std::optional<double> epsilon;  // 4/(9 lambda^2), only when lambda > sqrt(8/3)
  Verdict verdict = Verdict::bounded;
  double alpha = 0.05;
  double lambda_star = 0.0;

  bool is_significant() const { return verdict == Verdict::significant; }
  // Bounds on P when epsilon is unavailable.
  static constexpr double bound_low = 1.0 / 6.0;
  static constexpr double bound_high = 1.0;
};

inline SignificanceResult compare_ds(double mean_a, double var_a, double mean_b, double var_b, double alpha = 0.05) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("compare_ds: alpha must be in (0, 1)");
  if (!(var_a >= 0.0) || !(var_b >= 0.0)) throw input_error("compare_ds: variances must be >= 0");
  SignificanceResult r;
  r.alpha = alpha;
  r.lambda_star = vp_lambda_star(alpha);
  r.delta = std::abs(mean_a - mean_b);
  r.s_delta = std::sqrt(var_a + var_b);
  if (r.s_delta == 0.0) {
    if (r.delta > 0.0) throw degenerate_error("compare_ds: no dispersion");
    return r;
  }
  r.lambda = r.delta / r.s_delta;
  if (r.lambda > vp_lambda_min) {
    r.epsilon = 4.0 / (9.0 * r.lambda * r.lambda);
    r.verdict = r.lambda >= r.lambda_star ? Verdict::significant : Verdict::undecided;
  }
  return r;
}

inline SignificanceResult compare_ds(const DsSummary& a, const DsSummary& b, double alpha = 0.05) {
  return compare_ds(a.mean, a.variance, b.mean, b.variance, alpha);
}

inline SignificanceResult compare_ds(const FractalEstimate& a, const FractalEstimate& b, double alpha = 0.05) {
  return compare_ds(a.d_s, a.var_ds, b.d_s, b.var_ds, alpha);
}

inline SignificanceResult compare_ds(const CalibrationEnsemble& a, const CalibrationEnsemble& b, double alpha = 0.05) {
  return compare_ds(a.mean_ds, a.var_total, b.mean_ds, b.var_total, alpha);
}

}  // namespace rwalk

#endif  // RWALK_FRACTAL_HPP
