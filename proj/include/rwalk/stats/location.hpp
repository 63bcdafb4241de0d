#ifndef RWALK_STATS_LOCATION_HPP
#define RWALK_STATS_LOCATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rwalk/error.hpp"
#include "rwalk/stats/common.hpp"

namespace rwalk::stats {

struct LocationEstimate {
  double median = 0.0;  // Hodges-Lehmann point estimate
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
  double confidence = 0.95;
  bool exact = true;
};

struct LocationOptions {
  double alpha = 0.05;
  std::size_t exact_limit = 50;
};

/// Null distribution of the Wilcoxon signed-rank statistic W+ for n pairs,
/// returned as P(W+ = w) for w = 0 .. n(n+1)/2.
inline std::vector<double> signed_rank_pmf(std::size_t n) {
  const std::size_t top = n * (n + 1) / 2;
  std::vector<double> counts(top + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    reach += k;
    for (std::size_t w = reach; w >= k; --w) counts[w] += counts[w - k];
  }
  const double total = std::ldexp(1.0, static_cast<int>(n));
  for (auto& c : counts) c /= total;
  return counts;
}

inline std::vector<double> walsh_averages(std::span<const double> x) {
  std::vector<double> w;
  w.reserve(x.size() * (x.size() + 1) / 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i; j < x.size(); ++j) w.push_back(x[i] + (x[j] - x[i]) / 2.0);
  }
  return w;
}

/// Hodges-Lehmann estimate (median of Walsh averages) with the
/// distribution-free signed-rank confidence interval.
inline LocationEstimate hl_location(std::span<const double> x, const LocationOptions& opt = {}) {
  require_complete(x, "hl_location");
  if (x.size() < 3) throw input_error("hl_location: need at least 3 points");
  const std::size_t n = x.size();
  auto w = walsh_averages(x);
  const std::size_t m = w.size();

  // Lower order-statistic index k: largest k with P(W+ <= k - 1) <= alpha/2.
  std::size_t k = 0;
  LocationEstimate est;
  est.n = n;
  est.confidence = 1.0 - opt.alpha;
  if (n <= opt.exact_limit) {
    const auto pmf = signed_rank_pmf(n);
    double cum = 0.0;
    for (std::size_t j = 0; j < pmf.size(); ++j) {
      cum += pmf[j];
      if (cum > opt.alpha / 2.0) break;
      k = j + 1;
    }
  } else {
    est.exact = false;
    const double nn = static_cast<double>(n);
    const double sd = std::sqrt(nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0);
    const double kk = std::floor(static_cast<double>(m) / 2.0 + 0.5 - normal_quantile(1.0 - opt.alpha / 2.0) * sd);
    k = kk > 0.0 ? static_cast<std::size_t>(kk) : 0;
  }
  k = std::clamp<std::size_t>(k, 1, (m + 1) / 2);

  std::sort(w.begin(), w.end());
  est.median = m % 2 == 1 ? w[m / 2] : w[m / 2 - 1] + (w[m / 2] - w[m / 2 - 1]) / 2.0;
  est.ci_low = w[k - 1];
  est.ci_high = w[m - k];
  return est;
}

}  // namespace rwalk::stats

#endif  // RWALK_STATS_LOCATION_HPP
