#ifndef RWALK_STATS_RUNS_HPP
#define RWALK_STATS_RUNS_HPP

#include <cmath>
#include <cstddef>
#include <span>

#include "rwalk/error.hpp"
#include "rwalk/stats/common.hpp"

namespace rwalk::stats {

struct RunsResult {
  std::size_t n_used = 0;
  std::size_t n_above = 0;
  std::size_t n_below = 0;
  std::size_t n_runs = 0;
  double median = 0.0;
  double p_rrd = 0.0;    // P(R = n_runs)
  double p_left = 0.0;   // P(R <= n_runs): too few runs, clustering
  double p_right = 0.0;  // P(R >= n_runs): too many runs, alternation
  bool exact = true;
};

struct RunsOptions {
  std::size_t exact_limit = 60;  // n_used above this uses the normal approximation
};

namespace detail {

inline double log_choose(std::size_t n, std::size_t k) {
  if (k > n) return -INFINITY;
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

inline double choose_ratio(std::size_t a, std::size_t b, std::size_t c, std::size_t d, double log_total) {
  if (b > a || d > c) return 0.0;
  return std::exp(log_choose(a, b) + log_choose(c, d) - log_total);
}

}  // namespace detail

/// Exact Wald-Wolfowitz probability P(R = r) for n1 and n2 items of each kind.
inline double runs_pmf(std::size_t r, std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) return r == 1 ? 1.0 : 0.0;
  if (r < 2 || r > n1 + n2) return 0.0;
  const double log_total = detail::log_choose(n1 + n2, n1);
  const std::size_t k = r / 2;
  if (r % 2 == 0) return 2.0 * detail::choose_ratio(n1 - 1, k - 1, n2 - 1, k - 1, log_total);
  return detail::choose_ratio(n1 - 1, k, n2 - 1, k - 1, log_total) +
         detail::choose_ratio(n1 - 1, k - 1, n2 - 1, k, log_total);
}

inline double runs_cdf(std::size_t r, std::size_t n1, std::size_t n2) {
  double p = 0.0;
  for (std::size_t i = 1; i <= r; ++i) p += runs_pmf(i, n1, n2);
  return std::min(p, 1.0);
}

/// Counts maximal same-side blocks about the median; points equal to the median are skipped.
inline RunsResult runs_test(std::span<const double> x, const RunsOptions& opt = {}) {
  require_complete(x, "runs_test");
  if (x.empty()) throw input_error("runs_test: empty series");
  RunsResult r;
  r.median = median(x);
  int prev = 0;
  for (double v : x) {
    if (v == r.median) continue;
    const int side = v > r.median ? 1 : -1;
    (side > 0 ? r.n_above : r.n_below)++;
    if (side != prev) ++r.n_runs;
    prev = side;
  }
  r.n_used = r.n_above + r.n_below;
  if (r.n_used == 0) throw degenerate_error("degenerate: no off-median points");
  if (r.n_used < 2) throw input_error("runs_test: need at least 2 off-median points");

  const std::size_t n1 = r.n_above, n2 = r.n_below;
  if (r.n_used <= opt.exact_limit || n1 == 0 || n2 == 0) {
    r.exact = true;
    r.p_rrd = runs_pmf(r.n_runs, n1, n2);
    r.p_left = runs_cdf(r.n_runs, n1, n2);
    r.p_right = std::min(1.0, 1.0 - r.p_left + r.p_rrd);
  } else {
    r.exact = false;
    const double n = static_cast<double>(r.n_used);
    const double a = static_cast<double>(n1), b = static_cast<double>(n2);
    const double mu = 2.0 * a * b / n + 1.0;
    const double sd = std::sqrt(2.0 * a * b * (2.0 * a * b - n) / (n * n * (n - 1.0)));
    const double runs = static_cast<double>(r.n_runs);
    r.p_left = normal_cdf((runs + 0.5 - mu) / sd);
    r.p_right = normal_sf((runs - 0.5 - mu) / sd);
    r.p_rrd = r.p_left - normal_cdf((runs - 0.5 - mu) / sd);
  }
  return r;
}

}  // namespace rwalk::stats

#endif  // RWALK_STATS_RUNS_HPP
