#ifndef RWALK_DEMO_HPP
#define RWALK_DEMO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rwalk/date.hpp"
#include "rwalk/io/csv.hpp"
#include "rwalk/rng.hpp"
#include "rwalk/series.hpp"

namespace rwalk::demo {

/// Synthetic stand-in for a small long-stay hospital: Poisson admissions and
/// discharges, occupancy as their running balance, two units splitting the
/// beds. Raw-data artefacts can be injected: inflated January-1 counts and a
/// run of empty rows.
struct HospitalOptions {
  std::size_t n = 1329;
  Date t0 = Date::from_ymd(2014, 5, 1);
  std::uint64_t seed = 20140501;
  std::uint64_t stream = 0;
  double start = 150.0;
  int beds = 192;
  double daily_rate = 1.2;
  double low_wall = 110.0;  // admissions pushed up below this
  double high_wall = 178.0; // discharges pushed up above this
  bool corrupt_new_year = true;
  double new_year_value = 950.0;
  bool with_gap = true;
  Date gap_start = Date::from_ymd(2014, 5, 29);
  Date gap_end = Date::from_ymd(2014, 6, 6);
  bool with_units = true;
};

struct Hospital {
  TimeSeries adm;
  TimeSeries dis;
  TimeSeries inp;
  // per unit: occupancy and sum of current stays (days) over the unit's patients
  std::vector<std::string> unit_labels;
  std::vector<TimeSeries> unit_inp;
  std::vector<TimeSeries> unit_stay;
};

inline Hospital simulate_hospital(const HospitalOptions& opt = {}) {
  auto g = rng::seed(opt.seed, opt.stream);
  Hospital h;
  h.adm = {"adm", opt.t0, std::vector<double>(opt.n)};
  h.dis = {"dis", opt.t0, std::vector<double>(opt.n)};
  h.inp = {"inp", opt.t0, std::vector<double>(opt.n)};
  double level = opt.start;
  for (std::size_t t = 0; t < opt.n; ++t) {
    double rate_in = opt.daily_rate, rate_out = opt.daily_rate;
    if (level < opt.low_wall) rate_in += 0.2 * (opt.low_wall - level);
    if (level > opt.high_wall) rate_out += 0.2 * (level - opt.high_wall);
    const int a = t == 0 ? 0 : rng::poisson_sample(g, std::min(rate_in, 50.0));
    int d = t == 0 ? 0 : rng::poisson_sample(g, std::min(rate_out, 50.0));
    d = std::min(d, static_cast<int>(level) + a);
    level += a - d;
    h.adm.values[t] = a;
    h.dis.values[t] = d;
    h.inp.values[t] = level;
  }

  if (opt.with_units) {
    // the acute unit holds about 40% of the patients. Stay sums age by one day
    // per patient; leavers take an average share with them.
    h.unit_labels = {"acute", "longstay"};
    h.unit_inp.assign(2, TimeSeries{"", opt.t0, std::vector<double>(opt.n)});
    h.unit_stay.assign(2, TimeSeries{"", opt.t0, std::vector<double>(opt.n)});
    double stay[2] = {0.0, 0.0};
    double prev[2] = {0.0, 0.0};
    for (std::size_t t = 0; t < opt.n; ++t) {
      const double total = h.inp.values[t];
      const double a = std::round(total * (0.38 + 0.04 * rng::uniform01(g)));
      const double counts[2] = {a, total - a};
      for (int u = 0; u < 2; ++u) {
        const double c = counts[u];
        if (t == 0) {
          stay[u] = c * (u == 0 ? 12.0 : 40.0);
        } else {
          stay[u] += prev[u];
          if (c < prev[u]) stay[u] *= c / prev[u];
        }
        h.unit_inp[static_cast<std::size_t>(u)].values[t] = c;
        h.unit_stay[static_cast<std::size_t>(u)].values[t] = std::round(stay[u]);
        prev[u] = c;
      }
    }
    for (std::size_t u = 0; u < 2; ++u) {
      h.unit_inp[u].label = "unit:" + h.unit_labels[u] + ":inp";
      h.unit_stay[u].label = "unit:" + h.unit_labels[u] + ":stay";
    }
  }

  if (opt.corrupt_new_year) {
    for (std::size_t t = 1; t + 1 < opt.n; ++t) {
      const Date d = h.adm.date_at(t);
      if (d.month() == 1 && d.day() == 1) {
        h.adm.values[t] = opt.new_year_value + h.adm.values[t];
        h.dis.values[t] = opt.new_year_value + h.dis.values[t];
      }
    }
  }
  return h;
}

/// Writes date,adm,dis,inp[,<unit>_inp,<unit>_stay...]; days inside the
/// configured gap are written as empty cells.
inline void write_hospital_csv(std::ostream& os, const Hospital& h, const HospitalOptions& opt = {}) {
  os << "date,adm,dis,inp";
  for (const auto& u : h.unit_labels) os << ',' << u << "_inp," << u << "_stay";
  os << '\n';
  for (std::size_t t = 0; t < h.inp.size(); ++t) {
    const Date d = h.inp.date_at(t);
    const bool blank = opt.with_gap && d >= opt.gap_start && d <= opt.gap_end;
    auto cell = [&](double v) { return blank ? std::string() : io::format_number(v); };
    os << d.iso() << ',' << cell(h.adm.values[t]) << ',' << cell(h.dis.values[t]) << ',' << cell(h.inp.values[t]);
    for (std::size_t u = 0; u < h.unit_labels.size(); ++u) {
      os << ',' << io::format_number(h.unit_inp[u].values[t]) << ',' << io::format_number(h.unit_stay[u].values[t]);
    }
    os << '\n';
  }
}

}  // namespace rwalk::demo

#endif  // RWALK_DEMO_HPP
