#ifndef RWALK_STATS_COMMON_HPP
#define RWALK_STATS_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "rwalk/error.hpp"
#include "rwalk/series.hpp"

namespace rwalk::stats {

inline void require_complete(std::span<const double> x, const char* what) {
  if (has_missing(x)) throw input_error(std::string(what) + ": series has missing values");
}

/// Median of a copy; average of the two middle order statistics for even n.
inline double median(std::vector<double> v) {
  if (v.empty()) throw input_error("median of empty sample");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return lo + (hi - lo) / 2.0;
}

inline double median(std::span<const double> x) { return median(std::vector<double>(x.begin(), x.end())); }

/// k-th order statistic, 1-based; reorders v.
inline double order_stat(std::vector<double>& v, std::size_t k) {
  auto it = v.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(v.begin(), it, v.end());
  return *it;
}

inline double normal_cdf(double z) { return boost::math::cdf(boost::math::normal(), z); }

inline double normal_sf(double z) { return boost::math::cdf(boost::math::complement(boost::math::normal(), z)); }

inline double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

/// Mid-ranks (1-based); tied values share the mean of their positions.
inline std::vector<double> midranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = rank;
    i = j + 1;
  }
  return r;
}

}  // namespace rwalk::stats

#endif  // RWALK_STATS_COMMON_HPP
