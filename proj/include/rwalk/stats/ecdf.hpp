#ifndef RWALK_STATS_ECDF_HPP
#define RWALK_STATS_ECDF_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "rwalk/error.hpp"
#include "rwalk/stats/common.hpp"

namespace rwalk::stats {

/// Right-continuous empirical CDF: F(x) = #{x_i <= x} / n.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> x) : sorted_(x.begin(), x.end()) {
    require_complete(x, "empirical_cdf");
    if (sorted_.empty()) throw input_error("empirical_cdf: empty sample");
    std::sort(sorted_.begin(), sorted_.end());
  }

  double operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
  }

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  /// (x, F(x)) at each distinct sample value.
  std::vector<std::pair<double, double>> steps() const {
    std::vector<std::pair<double, double>> out;
    const double n = static_cast<double>(sorted_.size());
    for (std::size_t i = 0; i < sorted_.size(); ++i) {
      if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) continue;
      out.emplace_back(sorted_[i], static_cast<double>(i + 1) / n);
    }
    return out;
  }

 private:
  std::vector<double> sorted_;
};

inline EmpiricalCdf empirical_cdf(std::span<const double> x) { return EmpiricalCdf(x); }

/// Q(t) = P(K > t) for the Kolmogorov distribution. Uses the theta-function
/// form for small t, where the alternating series converges slowly.
inline double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.0) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double j = 2.0 * k - 1.0;
      s += std::exp(-j * j * pi2 / (8.0 * t * t));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / t * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

struct SmirnovResult {
  double d = 0.0;
  double p = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double statistic = 0.0;  // sqrt(n_a n_b / (n_a + n_b)) * D
};

/// Two-sample Smirnov test. Both CDFs are evaluated at every pooled value, so
/// ties across samples contribute no spurious jump.
inline SmirnovResult smirnov_test(std::span<const double> a, std::span<const double> b) {
  require_complete(a, "smirnov_test");
  require_complete(b, "smirnov_test");
  if (a.empty() || b.empty()) throw input_error("smirnov_test: both samples need at least 1 point");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());

  SmirnovResult r;
  r.n_a = sa.size();
  r.n_b = sb.size();
  std::size_t i = 0, j = 0;
  while (i < sa.size() || j < sb.size()) {
    double v;
    if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j])) v = sa[i];
    else v = sb[j];
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    r.d = std::max(r.d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  r.statistic = std::sqrt(na * nb / (na + nb)) * r.d;
  r.p = kolmogorov_survival(r.statistic);
  return r;
}

}  // namespace rwalk::stats

#endif  // RWALK_STATS_ECDF_HPP
