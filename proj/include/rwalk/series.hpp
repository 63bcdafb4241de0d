#ifndef RWALK_SERIES_HPP
#define RWALK_SERIES_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rwalk/date.hpp"

namespace rwalk {

/// Marker for a day without a value. Distinct from 0; serialized as an empty CSV cell.
inline constexpr double missing_value = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

inline bool has_missing(std::span<const double> values) {
  for (double v : values) {
    if (is_missing(v)) return true;
  }
  return false;
}

/// Uniformly sampled daily series (dt = 1 day) starting at t0.
struct TimeSeries {
  std::string label;
  Date t0;
  std::vector<double> values;

  TimeSeries() = default;
  TimeSeries(std::string l, Date start, std::vector<double> v)
      : label(std::move(l)), t0(start), values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  std::span<const double> view() const { return values; }
  Date date_at(std::size_t i) const { return t0 + static_cast<long>(i); }

  std::optional<std::size_t> index_of(Date d) const {
    const long off = d - t0;
    if (off < 0 || static_cast<std::size_t>(off) >= values.size()) return std::nullopt;
    return static_cast<std::size_t>(off);
  }

  /// Same start and length.
  bool aligned_with(const TimeSeries& other) const {
    return t0 == other.t0 && size() == other.size();
  }
};

}  // namespace rwalk

#endif  // RWALK_SERIES_HPP
