#ifndef RWALK_STATS_NORMALITY_HPP
#define RWALK_STATS_NORMALITY_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

#include "rwalk/error.hpp"
#include "rwalk/stats/common.hpp"

namespace rwalk::stats {

struct NormalityResult {
  double statistic = 0.0;
  double p = 1.0;  // chi-square(2) survival
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::size_t n = 0;
};

/// chi-square with 2 degrees of freedom has survival exp(-x/2).
inline double chi2_2_survival(double x) { return x <= 0.0 ? 1.0 : std::exp(-x / 2.0); }

namespace detail {

struct Moments {
  double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

inline Moments central_moments(std::span<const double> x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m.m2 += d2;
    m.m3 += d2 * d;
    m.m4 += d2 * d2;
  }
  m.m2 /= n;
  m.m3 /= n;
  m.m4 /= n;
  return m;
}

}  // namespace detail

/// JB = n/6 (S^2 + K^2/4) with moment skewness S and excess kurtosis K.
inline NormalityResult jarque_bera(std::span<const double> x) {
  require_complete(x, "jarque_bera");
  if (x.size() < 8) throw input_error("jarque_bera: need at least 8 points");
  const auto m = detail::central_moments(x);
  if (!(m.m2 > 0.0)) throw degenerate_error("jarque_bera: zero variance");
  NormalityResult r;
  r.n = x.size();
  r.skewness = m.m3 / std::pow(m.m2, 1.5);
  r.excess_kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
  const double n = static_cast<double>(r.n);
  r.statistic = n / 6.0 * (r.skewness * r.skewness + r.excess_kurtosis * r.excess_kurtosis / 4.0);
  r.p = chi2_2_survival(r.statistic);
  return r;
}

/// Robust Jarque-Bera (Gel & Gastwirth): the standard deviation in S and K is
/// replaced by J = sqrt(pi/2) * mean|x - median|, and the kurtosis term uses
/// C2 = 64 instead of 24.
inline NormalityResult jarque_bera_gel(std::span<const double> x) {
  require_complete(x, "jarque_bera_gel");
  if (x.size() < 8) throw input_error("jarque_bera_gel: need at least 8 points");
  const double med = median(x);
  double mad = 0.0;
  for (double v : x) mad += std::abs(v - med);
  mad /= static_cast<double>(x.size());
  const double j = std::sqrt(std::numbers::pi / 2.0) * mad;
  if (!(j > 0.0)) throw degenerate_error("jarque_bera_gel: zero spread");
  const auto m = detail::central_moments(x);
  NormalityResult r;
  r.n = x.size();
  r.skewness = m.m3 / (j * j * j);
  r.excess_kurtosis = m.m4 / (j * j * j * j) - 3.0;
  const double n = static_cast<double>(r.n);
  r.statistic = n / 6.0 * r.skewness * r.skewness + n / 64.0 * r.excess_kurtosis * r.excess_kurtosis;
  r.p = chi2_2_survival(r.statistic);
  return r;
}

}  // namespace rwalk::stats

#endif  // RWALK_STATS_NORMALITY_HPP
