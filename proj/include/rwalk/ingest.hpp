#ifndef RWALK_INGEST_HPP
#define RWALK_INGEST_HPP

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwalk/date.hpp"
#include "rwalk/error.hpp"
#include "rwalk/io/csv.hpp"
#include "rwalk/series.hpp"

namespace rwalk {

enum class DateFormat { iso, mdy };

/// How a gap's net change is spread over the missing days.
///   missing_days ("paper" on the command line): step = (y_after - y_before) / g,
///          g = missing days; the last filled level equals y_after.
///   span:  step = (y_after - y_before) / (g + 1); every interval across the
///          gap, including the exit into y_after, gets the same step.
enum class GapMode { missing_days, span };

struct UnitColumns {
  std::string label;
  std::string inp_column;
  std::string stay_sum_column;
};

/// Column mapping for `load_csv`. Any named column must exist in the header.
struct CsvSchema {
  std::string date_column = "date";
  std::optional<std::string> adm = "adm";
  std::optional<std::string> dis = "dis";
  std::optional<std::string> inp = "inp";
  std::vector<UnitColumns> units;
  char delimiter = ',';
  DateFormat date_format = DateFormat::iso;
};

/// One day of hospital-wide counts.
struct DailyRecord {
  Date date;
  double admissions = missing_value;
  double discharges = missing_value;
  double inpatients = missing_value;
};

/// A run of consecutive missing days in one series.
struct Gap {
  std::string series;
  Date start;
  Date end;

  std::size_t length() const { return static_cast<std::size_t>(end - start) + 1; }
  std::string describe() const { return "gap [" + start.iso() + "," + end.iso() + "]"; }
};

struct UnitSeries {
  TimeSeries inp;
  TimeSeries mean_stay;
};

struct HospitalBundle {
  std::optional<TimeSeries> adm;
  std::optional<TimeSeries> dis;
  std::optional<TimeSeries> inp;
  std::map<std::string, UnitSeries> units;
  int bed_capacity = 192;
  std::vector<Gap> gaps;
  std::vector<std::string> warnings;

  Date t0() const;
  std::size_t size() const;
  std::vector<DailyRecord> records() const;
};

/// One modification applied by a correction rule.
struct Correction {
  std::string series;
  std::size_t index = 0;
  Date date;
  double old_value = missing_value;
  double new_value = missing_value;
  std::string rule;
};

struct Corrected {
  TimeSeries series;
  std::vector<Correction> log;

  std::size_t count() const { return log.size(); }
};

namespace detail {

inline std::vector<Gap> find_gaps(const TimeSeries& s) {
  std::vector<Gap> gaps;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_missing(s.values[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < s.size() && is_missing(s.values[j + 1])) ++j;
    gaps.push_back({s.label, s.date_at(i), s.date_at(j)});
    i = j + 1;
  }
  return gaps;
}

inline std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw input_error("column '" + name + "' not found in header");
}

}  // namespace detail

inline Date HospitalBundle::t0() const {
  for (const auto* s : {&adm, &dis, &inp}) {
    if (*s) return (*s)->t0;
  }
  if (!units.empty()) return units.begin()->second.inp.t0;
  return Date{};
}

inline std::size_t HospitalBundle::size() const {
  for (const auto* s : {&adm, &dis, &inp}) {
    if (*s) return (*s)->size();
  }
  if (!units.empty()) return units.begin()->second.inp.size();
  return 0;
}

inline std::vector<DailyRecord> HospitalBundle::records() const {
  std::vector<DailyRecord> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].date = t0() + static_cast<long>(i);
    if (adm) out[i].admissions = adm->values[i];
    if (dis) out[i].discharges = dis->values[i];
    if (inp) out[i].inpatients = inp->values[i];
  }
  return out;
}

/// Replaces every January-1 value above `threshold` by the mean of December 31
/// and January 2. Other points are untouched.
inline Corrected correct_new_year(const TimeSeries& series, double threshold) {
  if (series.size() < 3) throw input_error(series.label + ": new-year correction needs >= 3 points");
  Corrected out{series, {}};
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Date d = series.date_at(i);
    if (d.month() != 1 || d.day() != 1) continue;
    const double v = series.values[i];
    if (is_missing(v) || !(v > threshold)) continue;
    if (i == 0 || i + 1 == series.size()) {
      throw input_error(series.label + ": January-1 outlier on " + d.iso() +
                        " cannot average at boundary");
    }
    const double before = series.values[i - 1];
    const double after = series.values[i + 1];
    if (is_missing(before) || is_missing(after)) {
      throw input_error(series.label + ": January-1 outlier on " + d.iso() +
                        " has a missing neighbour");
    }
    const double replacement = (before + after) / 2.0;
    out.series.values[i] = replacement;
    out.log.push_back({series.label, i, d, v, replacement, "new_year"});
  }
  return out;
}

/// Fills days [gap_start, gap_end] (indices) by spreading the net change
/// between the bracketing known values in equal daily steps.
inline Corrected fill_gap(const TimeSeries& series, std::size_t gap_start, std::size_t gap_end,
                          GapMode mode = GapMode::missing_days) {
  if (gap_start > gap_end || gap_end >= series.size()) {
    throw input_error(series.label + ": invalid gap range");
  }
  if (gap_start == 0 || gap_end + 1 == series.size()) {
    throw input_error(series.label + ": gap touches series boundary");
  }
  const double before = series.values[gap_start - 1];
  const double after = series.values[gap_end + 1];
  if (is_missing(before) || is_missing(after)) {
    throw input_error(series.label + ": gap is not bracketed by known values");
  }
  const std::size_t g = gap_end - gap_start + 1;
  const double intervals = mode == GapMode::missing_days ? static_cast<double>(g) : static_cast<double>(g + 1);
  const double step = (after - before) / intervals;

  Corrected out{series, {}};
  double level = before;
  const char* rule = mode == GapMode::missing_days ? "gap_fill_missing_days" : "gap_fill_span";
  for (std::size_t i = gap_start; i <= gap_end; ++i) {
    level += step;
    out.log.push_back({series.label, i, series.date_at(i), series.values[i], level, rule});
    out.series.values[i] = level;
  }
  return out;
}

inline Corrected fill_gap(const TimeSeries& series, Date gap_start, Date gap_end,
                          GapMode mode = GapMode::missing_days) {
  const auto a = series.index_of(gap_start);
  const auto b = series.index_of(gap_end);
  if (!a || !b) throw input_error(series.label + ": gap dates outside series");
  return fill_gap(series, *a, *b, mode);
}

/// Fills every interior run of missing values.
inline Corrected fill_gaps(const TimeSeries& series, GapMode mode = GapMode::missing_days) {
  Corrected out{series, {}};
  for (const auto& gap : detail::find_gaps(series)) {
    auto step = fill_gap(out.series, gap.start, gap.end, mode);
    out.series = std::move(step.series);
    out.log.insert(out.log.end(), step.log.begin(), step.log.end());
  }
  return out;
}

/// out[0] = 0, out[t] = y[t] - y[t-1].
inline TimeSeries difference(const TimeSeries& series, std::string label = {}) {
  if (series.size() < 2) throw input_error(series.label + ": difference needs >= 2 points");
  TimeSeries out{label.empty() ? "diff(" + series.label + ")" : std::move(label), series.t0,
                 std::vector<double>(series.size(), 0.0)};
  for (std::size_t t = 1; t < series.size(); ++t) {
    out.values[t] = series.values[t] - series.values[t - 1];
  }
  return out;
}

/// Admissions minus discharges, day by day. The cumulative sum of this series
/// tracks occupancy.
inline TimeSeries daily_net(const TimeSeries& adm, const TimeSeries& dis, std::string label = "ddiad") {
  if (!adm.aligned_with(dis)) throw input_error("daily_net: admissions and discharges are misaligned");
  TimeSeries out{std::move(label), adm.t0, std::vector<double>(adm.size())};
  for (std::size_t t = 0; t < adm.size(); ++t) out.values[t] = adm.values[t] - dis.values[t];
  return out;
}

/// walk[0] = offset, walk[i] = walk[i-1] + net[i]. Inverse of `difference`
/// when offset is the first level.
inline TimeSeries reconstruct_walk(const TimeSeries& net, double offset = 0.0,
                                   std::string label = "xi") {
  if (net.empty()) throw input_error("reconstruct_walk: empty series");
  TimeSeries out{std::move(label), net.t0, std::vector<double>(net.size())};
  out.values[0] = offset;
  for (std::size_t i = 1; i < net.size(); ++i) out.values[i] = out.values[i - 1] + net.values[i];
  return out;
}

/// Daily mean length of stay: stay sum over patient count. Days with zero
/// patients (or missing inputs) get the missing marker.
inline TimeSeries mean_stay(const TimeSeries& stay_sums, const TimeSeries& patient_counts) {
  if (!stay_sums.aligned_with(patient_counts)) throw input_error("mean_stay: series are misaligned");
  TimeSeries out{"mean_stay", stay_sums.t0, std::vector<double>(stay_sums.size(), missing_value)};
  for (std::size_t d = 0; d < stay_sums.size(); ++d) {
    const double n = patient_counts.values[d];
    const double s = stay_sums.values[d];
    if (is_missing(n) || is_missing(s)) continue;
    if (n < 0) {
      throw input_error("mean_stay: negative patient count on " + patient_counts.date_at(d).iso());
    }
    if (n == 0) continue;
    out.values[d] = s / n;
  }
  return out;
}

/// Builds per-unit occupancy and mean-stay series from a parsed bundle's
/// unit columns.
inline void attach_units(HospitalBundle& bundle, const std::map<std::string, TimeSeries>& unit_inp,
                         const std::map<std::string, TimeSeries>& unit_stay) {
  for (const auto& [label, inp] : unit_inp) {
    auto it = unit_stay.find(label);
    if (it == unit_stay.end()) continue;
    auto ms = mean_stay(it->second, inp);
    ms.label = "unit:" + label + ":mean_stay";
    bundle.units[label] = UnitSeries{inp, std::move(ms)};
  }
}

/// Parses a daily CSV stream. Dates must increase strictly; holes in the
/// calendar become missing slots and are reported in `gaps`. Raw values are
/// kept as read; no correction is applied here.
inline HospitalBundle parse_csv(std::istream& in, const CsvSchema& schema, int bed_capacity = 192) {
  if (bed_capacity <= 0) throw input_error("bed capacity must be positive");
  if (!schema.adm && !schema.dis && !schema.inp && schema.units.empty()) {
    throw input_error("schema names no value column");
  }

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    for (auto f : io::split(line, schema.delimiter)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw input_error("empty CSV input");

  struct Target {
    std::string label;
    std::size_t column;
    std::vector<double> values;
  };
  const std::size_t date_col = detail::column_index(header, schema.date_column);
  std::vector<Target> targets;
  auto add = [&](const std::string& label, const std::string& column) {
    targets.push_back({label, detail::column_index(header, column), {}});
  };
  if (schema.adm) add("adm", *schema.adm);
  if (schema.dis) add("dis", *schema.dis);
  if (schema.inp) add("inp", *schema.inp);
  for (const auto& u : schema.units) {
    add("unit:" + u.label + ":inp", u.inp_column);
    add("unit:" + u.label + ":stay", u.stay_sum_column);
  }

  std::optional<Date> t0;
  std::optional<Date> previous;
  while (std::getline(in, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const auto fields = io::split(line, schema.delimiter);
    const std::string row = "row " + std::to_string(line_no);
    if (fields.size() != header.size()) {
      throw input_error(row + ": expected " + std::to_string(header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    Date date;
    try {
      date = schema.date_format == DateFormat::iso ? Date::parse_iso(fields[date_col])
                                                   : Date::parse_mdy(fields[date_col]);
    } catch (const input_error& e) {
      throw input_error(row + ": " + e.what());
    }
    if (previous && date <= *previous) {
      throw input_error(row + ": non-monotone dates (" + date.iso() + " after " +
                        previous->iso() + ")");
    }
    if (!t0) t0 = date;
    if (previous) {
      for (long k = 1; k < date - *previous; ++k) {
        for (auto& t : targets) t.values.push_back(missing_value);
      }
    }
    for (auto& t : targets) {
      const auto v = io::parse_cell(fields[t.column]);
      if (!v) {
        throw input_error(row + ": cannot parse '" + header[t.column] + "' value '" +
                          std::string(fields[t.column]) + "'");
      }
      t.values.push_back(*v);
    }
    previous = date;
  }
  if (!t0) throw input_error("CSV has a header but no data rows");

  HospitalBundle bundle;
  bundle.bed_capacity = bed_capacity;
  std::map<std::string, TimeSeries> by_label;
  for (auto& t : targets) by_label.emplace(t.label, TimeSeries{t.label, *t0, std::move(t.values)});

  auto take = [&](const char* label) -> std::optional<TimeSeries> {
    auto it = by_label.find(label);
    if (it == by_label.end()) return std::nullopt;
    return it->second;
  };
  bundle.adm = take("adm");
  bundle.dis = take("dis");
  bundle.inp = take("inp");
  std::map<std::string, TimeSeries> unit_inp, unit_stay;
  for (const auto& u : schema.units) {
    auto inp = by_label.at("unit:" + u.label + ":inp");
    auto stay = by_label.at("unit:" + u.label + ":stay");
    unit_inp.emplace(u.label, std::move(inp));
    unit_stay.emplace(u.label, std::move(stay));
  }
  attach_units(bundle, unit_inp, unit_stay);

  for (const auto* s : {&bundle.adm, &bundle.dis, &bundle.inp}) {
    if (!*s) continue;
    for (auto& g : detail::find_gaps(**s)) bundle.gaps.push_back(std::move(g));
    for (std::size_t i = 0; i < (*s)->size(); ++i) {
      const double v = (*s)->values[i];
      if (!is_missing(v) && v < 0) {
        bundle.warnings.push_back((*s)->label + ": negative value " + io::format_number(v) +
                                  " on " + (*s)->date_at(i).iso());
      }
    }
  }
  if (bundle.inp) {
    for (std::size_t i = 0; i < bundle.inp->size(); ++i) {
      if (bundle.inp->values[i] > bed_capacity) {
        bundle.warnings.push_back("inp: " + io::format_number(bundle.inp->values[i]) +
                                  " exceeds bed capacity on " + bundle.inp->date_at(i).iso());
      }
    }
  }
  return bundle;
}

/// Loads a daily CSV file; see `parse_csv`.
inline HospitalBundle load_csv(const std::string& path, const CsvSchema& schema,
                               int bed_capacity = 192) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  auto bundle = parse_csv(in, schema, bed_capacity);
  return bundle;
}

/// One JSON object per line: series, index, date, old, new, rule.
inline void write_corrections_jsonl(std::ostream& os, const std::vector<Correction>& log) {
  for (const auto& c : log) {
    nlohmann::ordered_json j;
    j["series"] = c.series;
    j["index"] = c.index;
    j["date"] = c.date.iso();
    j["old"] = is_missing(c.old_value) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(c.old_value);
    j["new"] = c.new_value;
    j["rule"] = c.rule;
    os << j.dump() << '\n';
  }
}

}  // namespace rwalk

#endif  // RWALK_INGEST_HPP
