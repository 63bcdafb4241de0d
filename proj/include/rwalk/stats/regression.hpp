#ifndef RWALK_STATS_REGRESSION_HPP
#define RWALK_STATS_REGRESSION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "rwalk/error.hpp"
#include "rwalk/stats/common.hpp"

namespace rwalk::stats {

struct CorrelationResult {
  double rho = 0.0;
  double p = 1.0;  // two-sided
  std::size_t n = 0;
  bool exact = false;
};

struct Interval {
  double estimate = 0.0;
  double low = 0.0;
  double high = 0.0;
};

struct TheilFit {
  Interval alpha;  // intercept
  Interval beta;   // slope
  double rho_s = 0.0;
  double p_rho = 1.0;
  std::size_t n = 0;
};

struct SpearmanOptions {
  std::size_t exact_limit = 10;  // permutation P for n at or below this
};

namespace detail {

inline double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw degenerate_error("spearman: zero rank variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

inline void check_pairs(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) throw input_error(std::string(what) + ": x and y differ in length");
  require_complete(x, what);
  require_complete(y, what);
  if (x.size() < 3) throw input_error(std::string(what) + ": need at least 3 pairs");
}

}  // namespace detail

/// Spearman's rho as Pearson correlation of mid-ranks. P is exact over all
/// permutations for small n, otherwise from t = rho sqrt((n-2)/(1-rho^2)).
inline CorrelationResult spearman(std::span<const double> x, std::span<const double> y,
                                  const SpearmanOptions& opt = {}) {
  detail::check_pairs(x, y, "spearman");
  const auto rx = midranks(x);
  auto ry = midranks(y);
  CorrelationResult r;
  r.n = x.size();
  r.rho = detail::pearson(rx, ry);

  if (r.n <= opt.exact_limit) {
    r.exact = true;
    std::sort(ry.begin(), ry.end());
    const double observed = std::abs(r.rho) - 1e-12;
    std::size_t hits = 0, total = 0;
    do {
      ++total;
      if (std::abs(detail::pearson(rx, ry)) >= observed) ++hits;
    } while (std::next_permutation(ry.begin(), ry.end()));
    r.p = static_cast<double>(hits) / static_cast<double>(total);
    return r;
  }
  if (std::abs(r.rho) >= 1.0) {
    r.p = 0.0;
    return r;
  }
  const double df = static_cast<double>(r.n) - 2.0;
  const double t = r.rho * std::sqrt(df / (1.0 - r.rho * r.rho));
  const boost::math::students_t dist(df);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
  return r;
}

/// Slopes (y_j - y_i)/(x_j - x_i) over all pairs i < j with x_i != x_j.
inline std::vector<double> pairwise_slopes(std::span<const double> x, std::span<const double> y) {
  std::vector<double> s;
  s.reserve(x.size() * (x.size() - 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[j] != x[i]) s.push_back((y[j] - y[i]) / (x[j] - x[i]));
    }
  }
  return s;
}

/// Theil slope, intercept and Sen's rank-based confidence intervals, plus
/// Spearman's rho between x and y.
inline TheilFit theil_fit(std::span<const double> x, std::span<const double> y, double alpha = 0.05) {
  detail::check_pairs(x, y, "theil_fit");
  auto slopes = pairwise_slopes(x, y);
  if (slopes.empty()) throw input_error("theil_fit: all x values are equal");
  const std::size_t n = x.size();
  const std::size_t count = slopes.size();

  TheilFit fit;
  fit.n = n;
  fit.beta.estimate = median(slopes);

  const double nn = static_cast<double>(n);
  const double c = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(nn * (nn - 1.0) * (2.0 * nn + 5.0) / 18.0);
  const double total = static_cast<double>(count);
  const auto lo_idx = static_cast<std::size_t>(std::max(1.0, std::floor((total - c) / 2.0)));
  const auto hi_idx = static_cast<std::size_t>(std::min(total, std::ceil((total + c) / 2.0) + 1.0));
  fit.beta.low = std::min(order_stat(slopes, lo_idx), fit.beta.estimate);
  fit.beta.high = std::max(order_stat(slopes, hi_idx), fit.beta.estimate);

  auto intercept_at = [&](double b) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - b * x[i];
    return median(std::move(r));
  };
  fit.alpha.estimate = intercept_at(fit.beta.estimate);
  const double a1 = intercept_at(fit.beta.low), a2 = intercept_at(fit.beta.high);
  fit.alpha.low = std::min({a1, a2, fit.alpha.estimate});
  fit.alpha.high = std::max({a1, a2, fit.alpha.estimate});

  try {
    const auto sp = spearman(x, y);
    fit.rho_s = sp.rho;
    fit.p_rho = sp.p;
  } catch (const degenerate_error&) {
    // y constant: no rank association to report
    fit.rho_s = 0.0;
    fit.p_rho = 1.0;
  }
  return fit;
}

/// Median pairwise slope only; skips the interval and correlation work.
inline double theil_slope(std::span<const double> x, std::span<const double> y) {
  detail::check_pairs(x, y, "theil_slope");
  auto slopes = pairwise_slopes(x, y);
  if (slopes.empty()) throw input_error("theil_slope: all x values are equal");
  return median(std::move(slopes));
}

}  // namespace rwalk::stats

#endif  // RWALK_STATS_REGRESSION_HPP
