#ifndef RWALK_IO_CSV_HPP
#define RWALK_IO_CSV_HPP

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rwalk/series.hpp"

namespace rwalk::io {

/// Shortest round-trip decimal form. Missing values become an empty string.
inline std::string format_number(double v) {
  if (is_missing(v)) return {};
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, p);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

/// Parses a numeric cell; empty cell -> missing marker, garbage -> nullopt.
inline std::optional<double> parse_cell(std::string_view cell) {
  if (cell.empty()) return missing_value;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || p != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Writes aligned series as `date,<label>...`; missing values as empty cells.
inline void write_series_csv(std::ostream& os, const std::vector<const TimeSeries*>& columns,
                             char delimiter = ',') {
  os << "date";
  for (const auto* s : columns) os << delimiter << s->label;
  os << '\n';
  if (columns.empty()) return;
  const auto& first = *columns.front();
  for (std::size_t i = 0; i < first.size(); ++i) {
    os << first.date_at(i).iso();
    for (const auto* s : columns) os << delimiter << format_number(s->values[i]);
    os << '\n';
  }
}

}  // namespace rwalk::io

#endif  // RWALK_IO_CSV_HPP
