#ifndef RWALK_PIPELINE_HPP
#define RWALK_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwalk/error.hpp"
#include "rwalk/fractal.hpp"
#include "rwalk/ingest.hpp"
#include "rwalk/io/csv.hpp"
#include "rwalk/io/json.hpp"
#include "rwalk/spectral.hpp"
#include "rwalk/stats.hpp"
#include "rwalk/version.hpp"

namespace rwalk {

struct AnalysisConfig {
  std::uint64_t seed = 5489;
  std::uint64_t stream_base = 0;
  std::size_t m = 100;  // traces per calibration ensemble; N follows the data
  double alpha = 0.05;
  spectral::WindowKind window = spectral::WindowKind::hann;
  GapMode gap_mode = GapMode::missing_days;
  std::optional<double> new_year_threshold;  // default 2 * beds
  CsvSchema schema;
  int beds = 192;
  bool anchor_walk = false;  // start the reconstructed walk at InP[0] instead of 0
  unsigned threads = 1;      // affects speed only
  std::string output_dir = "rwalk-out";

  double threshold() const { return new_year_threshold.value_or(2.0 * beds); }

  void validate() const {
    if (m < 2) throw input_error("config: M must be >= 2");
    if (!(alpha > 0.0 && alpha <= 1.0 / 6.0)) throw input_error("config: alpha must be in (0, 1/6]");
    if (beds <= 0) throw input_error("config: bed capacity must be positive");
  }
};

inline std::string_view to_string(GapMode m) { return m == GapMode::missing_days ? "paper" : "span"; }

inline GapMode parse_gap_mode(std::string_view s) {
  if (s == "paper") return GapMode::missing_days;
  if (s == "span") return GapMode::span;
  throw input_error("unknown gap mode '" + std::string(s) + "'");
}

/// Everything that influences report numbers; threads and output location are left out.
inline io::ojson to_json(const AnalysisConfig& c) {
  io::ojson j;
  j["seed"] = c.seed;
  j["stream_base"] = c.stream_base;
  j["m"] = c.m;
  j["alpha"] = c.alpha;
  j["window"] = spectral::to_string(c.window);
  j["gap_mode"] = to_string(c.gap_mode);
  j["new_year_threshold"] = c.threshold();
  j["beds"] = c.beds;
  j["anchor_walk"] = c.anchor_walk;
  io::ojson schema;
  schema["date_column"] = c.schema.date_column;
  schema["adm"] = c.schema.adm ? io::ojson(*c.schema.adm) : io::ojson(nullptr);
  schema["dis"] = c.schema.dis ? io::ojson(*c.schema.dis) : io::ojson(nullptr);
  schema["inp"] = c.schema.inp ? io::ojson(*c.schema.inp) : io::ojson(nullptr);
  io::ojson units = io::ojson::array();
  for (const auto& u : c.schema.units) {
    units.push_back({{"label", u.label}, {"inp", u.inp_column}, {"stay_sum", u.stay_sum_column}});
  }
  schema["units"] = std::move(units);
  schema["delimiter"] = std::string(1, c.schema.delimiter);
  schema["date_format"] = c.schema.date_format == DateFormat::iso ? "iso" : "mdy";
  j["schema"] = std::move(schema);
  return j;
}

/// 64-bit FNV-1a, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

struct SeriesReport {
  TimeSeries series;
  stats::LocationEstimate location;
  stats::RunsResult runs;
  stats::NormalityResult jarque_bera;
  stats::NormalityResult jarque_bera_gel;
  FractalEstimate fractal;
  spectral::SpectrumAnalysis spectrum;
  SignificanceResult vs_white;
  SignificanceResult vs_brownian;
  std::string classification;

  const std::string& label() const { return series.label; }
};

struct PairComparison {
  std::string a;
  std::string b;
  SignificanceResult result;
};

/// Does the walk rebuilt from admissions minus discharges behave like InP?
struct WalkCheck {
  stats::SmirnovResult dinp_vs_ddiad;
  SignificanceResult inp_vs_xi;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  std::string config_hash;
  std::string input_name;
  std::string input_hash;
};

struct AnalysisReport {
  AnalysisConfig config;
  Provenance provenance;
  Date t0;
  std::size_t n = 0;
  std::vector<Correction> corrections;
  std::vector<Gap> gaps;
  std::vector<std::string> warnings;
  CalibrationEnsemble white;
  CalibrationEnsemble brownian;
  std::vector<SeriesReport> series;
  std::vector<PairComparison> comparisons;
  std::optional<WalkCheck> walk_check;

  const SeriesReport* find(std::string_view label) const {
    for (const auto& s : series) {
      if (s.label() == label) return &s;
    }
    return nullptr;
  }
};

/// Verdict labels from the two ensemble comparisons. Only a significant
/// result counts as "distinguishable".
inline std::string classify(const SignificanceResult& vs_white, const SignificanceResult& vs_brownian) {
  const bool off_white = vs_white.is_significant();
  const bool off_brownian = vs_brownian.is_significant();
  if (off_white && !off_brownian) return "random-walk-like";
  if (!off_white && off_brownian) return "white-like";
  if (off_white && off_brownian) return "other";
  return "indeterminate";
}

/// Row/column order of the pairwise D_s comparison table.
inline constexpr std::array<std::string_view, 7> comparison_layout{"inp", "dis", "adm", "dinp", "xi", "brownian", "white"};

namespace detail {

template <class Fn>
auto step(const std::string& context, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const degenerate_error& e) {
    throw degenerate_error(context + ": " + e.what());
  } catch (const io_error&) {
    throw;
  } catch (const input_error& e) {
    throw input_error(context + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw input_error(context + ": " + e.what());
  }
}

inline SeriesReport analyze_series(TimeSeries s, const AnalysisConfig& cfg, const CalibrationEnsemble& white,
                                   const CalibrationEnsemble& brownian) {
  SeriesReport r;
  const std::string ctx = "analyze[" + s.label + "]";
  const auto x = s.view();
  r.location = step(ctx + " hl_location", [&] { return stats::hl_location(x); });
  r.runs = step(ctx + " runs_test", [&] { return stats::runs_test(x); });
  r.jarque_bera = step(ctx + " jarque_bera", [&] { return stats::jarque_bera(x); });
  r.jarque_bera_gel = step(ctx + " jarque_bera_gel", [&] { return stats::jarque_bera_gel(x); });
  r.fractal = step(ctx + " sevcik_dimension", [&] { return sevcik_dimension(x); });
  r.spectrum = step(ctx + " spectrum", [&] { return spectral::analyze_spectrum(x, cfg.window); });
  r.vs_white = step(ctx + " compare_ds[white]", [&] {
    return compare_ds(DsSummary::of(r.fractal), DsSummary::of(white), cfg.alpha);
  });
  r.vs_brownian = step(ctx + " compare_ds[brownian]", [&] {
    return compare_ds(DsSummary::of(r.fractal), DsSummary::of(brownian), cfg.alpha);
  });
  r.classification = classify(r.vs_white, r.vs_brownian);
  r.series = std::move(s);
  return r;
}

}  // namespace detail

/// Corrected and derived series, before any statistics.
struct PreparedSeries {
  std::vector<TimeSeries> series;  // inp, adm, dis, dinp, ddiad, xi, complete unit occupancies
  std::vector<Correction> corrections;
  std::vector<std::string> warnings;

  const TimeSeries* find(std::string_view label) const {
    for (const auto& s : series) {
      if (s.label == label) return &s;
    }
    return nullptr;
  }
};

/// January-1 correction of admissions and discharges, gap filling, then the
/// difference, net-flow and reconstructed-walk series.
inline PreparedSeries prepare_series(const AnalysisConfig& config, HospitalBundle bundle) {
  PreparedSeries out;
  auto correct = [&](std::optional<TimeSeries>& s, bool new_year) {
    if (!s) return;
    if (new_year) {
      auto c = detail::step("correct_new_year[" + s->label + "]",
                            [&] { return correct_new_year(*s, config.threshold()); });
      out.corrections.insert(out.corrections.end(), c.log.begin(), c.log.end());
      *s = std::move(c.series);
    }
    auto f = detail::step("fill_gap[" + s->label + "]", [&] { return fill_gaps(*s, config.gap_mode); });
    out.corrections.insert(out.corrections.end(), f.log.begin(), f.log.end());
    *s = std::move(f.series);
  };
  correct(bundle.adm, true);
  correct(bundle.dis, true);
  correct(bundle.inp, false);

  auto& work = out.series;
  if (bundle.inp) work.push_back(*bundle.inp);
  if (bundle.adm) work.push_back(*bundle.adm);
  if (bundle.dis) work.push_back(*bundle.dis);
  if (bundle.inp) work.push_back(detail::step("difference[inp]", [&] { return difference(*bundle.inp, "dinp"); }));
  if (bundle.adm && bundle.dis) {
    auto ddiad = detail::step("daily_net", [&] { return daily_net(*bundle.adm, *bundle.dis, "ddiad"); });
    const double offset = config.anchor_walk && bundle.inp ? bundle.inp->values.front() : 0.0;
    auto xi = detail::step("reconstruct_walk", [&] { return reconstruct_walk(ddiad, offset, "xi"); });
    work.push_back(std::move(ddiad));
    work.push_back(std::move(xi));
  }
  for (const auto& entry : bundle.units) {
    const auto& unit_inp = entry.second.inp;
    if (has_missing(unit_inp.view())) {
      out.warnings.push_back(unit_inp.label + ": has missing values, not analyzed");
      continue;
    }
    work.push_back(unit_inp);
  }
  return out;
}

/// The full chain on an already parsed bundle: corrections, derived series,
/// statistics, calibration at matching N, pairwise comparisons.
inline AnalysisReport run_pipeline(const AnalysisConfig& config, HospitalBundle bundle,
                                   std::string input_name = {}, std::string input_hash = {}) {
  config.validate();
  AnalysisReport rep;
  rep.config = config;
  rep.provenance = {config.seed, config.stream_base, fnv1a_hex(to_json(config).dump()), std::move(input_name),
                    std::move(input_hash)};
  rep.t0 = bundle.t0();
  rep.n = bundle.size();
  rep.gaps = bundle.gaps;
  rep.warnings = bundle.warnings;

  auto prepared = prepare_series(config, std::move(bundle));
  rep.corrections = std::move(prepared.corrections);
  rep.warnings.insert(rep.warnings.end(), prepared.warnings.begin(), prepared.warnings.end());
  auto& work = prepared.series;
  if (work.empty()) throw input_error("pipeline: no series to analyze");
  if (rep.n < 3) throw input_error("pipeline: need at least 3 days");

  CalibrationOptions copt;
  copt.seed = config.seed;
  copt.stream_base = config.stream_base;
  copt.threads = config.threads;
  rep.white = detail::step("calibrate[white]", [&] { return calibrate(NoiseKind::white, config.m, rep.n, copt); });
  rep.brownian =
      detail::step("calibrate[brownian]", [&] { return calibrate(NoiseKind::brownian, config.m, rep.n, copt); });

  for (auto& s : work) rep.series.push_back(detail::analyze_series(std::move(s), config, rep.white, rep.brownian));

  auto summary_of = [&](std::string_view label) -> std::optional<DsSummary> {
    if (label == "white") return DsSummary::of(rep.white, "white");
    if (label == "brownian") return DsSummary::of(rep.brownian, "brownian");
    if (const auto* s = rep.find(label)) return DsSummary::of(s->fractal, std::string(label));
    return std::nullopt;
  };
  for (std::size_t i = 0; i < comparison_layout.size(); ++i) {
    const auto a = summary_of(comparison_layout[i]);
    if (!a) continue;
    for (std::size_t j = i + 1; j < comparison_layout.size(); ++j) {
      const auto b = summary_of(comparison_layout[j]);
      if (!b) continue;
      auto res = detail::step("compare_ds[" + a->label + "," + b->label + "]",
                              [&] { return compare_ds(*a, *b, config.alpha); });
      rep.comparisons.push_back({a->label, b->label, res});
    }
  }

  const auto* dinp = rep.find("dinp");
  const auto* dd = rep.find("ddiad");
  const auto* inp = rep.find("inp");
  const auto* xi = rep.find("xi");
  if (dinp && dd && inp && xi) {
    WalkCheck w;
    w.dinp_vs_ddiad = detail::step("walk_check smirnov",
                                   [&] { return stats::smirnov_test(dinp->series.view(), dd->series.view()); });
    w.inp_vs_xi = detail::step("walk_check compare_ds", [&] { return compare_ds(inp->fractal, xi->fractal, config.alpha); });
    rep.walk_check = w;
  }
  return rep;
}

struct LoadedInput {
  HospitalBundle bundle;
  std::string name;  // file name without directories
  std::string hash;  // FNV-1a of the raw bytes
};

inline LoadedInput load_input(const AnalysisConfig& config, const std::string& input_path) {
  std::ifstream in(input_path, std::ios::binary);
  if (!in) throw input_error("load: cannot open '" + input_path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::istringstream text(bytes);
  auto bundle = detail::step("load", [&] { return parse_csv(text, config.schema, config.beds); });
  return {std::move(bundle), std::filesystem::path(input_path).filename().string(), fnv1a_hex(bytes)};
}

/// Loads `input_path` with the config's schema, then runs the chain.
inline AnalysisReport run_pipeline(const AnalysisConfig& config, const std::string& input_path) {
  auto in = load_input(config, input_path);
  return run_pipeline(config, std::move(in.bundle), std::move(in.name), std::move(in.hash));
}

inline io::ojson to_json(const SeriesReport& s) {
  io::ojson j;
  j["label"] = s.label();
  j["n"] = s.series.size();
  j["location"] = io::to_json(s.location);
  j["runs"] = io::to_json(s.runs);
  j["normality"] = {{"jarque_bera", io::to_json(s.jarque_bera)}, {"jarque_bera_gel", io::to_json(s.jarque_bera_gel)}};
  j["fractal"] = io::to_json(s.fractal);
  j["spectrum"] = io::to_json(s.spectrum);
  j["vs_white"] = io::to_json(s.vs_white);
  j["vs_brownian"] = io::to_json(s.vs_brownian);
  j["classification"] = s.classification;
  return j;
}

inline io::ojson to_json(const AnalysisReport& r) {
  io::ojson j;
  j["tool"] = {{"name", tool_name}, {"version", tool_version}};
  j["provenance"] = {{"seed", r.provenance.seed},
                     {"stream_base", r.provenance.stream_base},
                     {"config_hash", r.provenance.config_hash},
                     {"input", r.provenance.input_name},
                     {"input_hash", r.provenance.input_hash}};
  j["config"] = to_json(r.config);
  io::ojson ingest;
  ingest["t0"] = r.t0.iso();
  ingest["n"] = r.n;
  io::ojson gaps = io::ojson::array();
  for (const auto& g : r.gaps) {
    gaps.push_back({{"series", g.series}, {"start", g.start.iso()}, {"end", g.end.iso()}, {"length", g.length()}});
  }
  ingest["gaps"] = std::move(gaps);
  io::ojson corr = io::ojson::array();
  for (const auto& c : r.corrections) {
    corr.push_back({{"series", c.series},
                    {"index", c.index},
                    {"date", c.date.iso()},
                    {"old", is_missing(c.old_value) ? io::ojson(nullptr) : io::ojson(c.old_value)},
                    {"new", c.new_value},
                    {"rule", c.rule}});
  }
  ingest["corrections"] = std::move(corr);
  ingest["warnings"] = r.warnings;
  j["ingest"] = std::move(ingest);
  j["ensembles"] = {{"white", io::to_json(r.white, false)}, {"brownian", io::to_json(r.brownian, false)}};
  io::ojson series = io::ojson::array();
  for (const auto& s : r.series) series.push_back(to_json(s));
  j["series"] = std::move(series);
  io::ojson cmp = io::ojson::array();
  for (const auto& c : r.comparisons) cmp.push_back({{"a", c.a}, {"b", c.b}, {"result", io::to_json(c.result)}});
  j["comparisons"] = std::move(cmp);
  if (r.walk_check) {
    j["walk_check"] = {{"dinp_vs_ddiad", io::to_json(r.walk_check->dinp_vs_ddiad)},
                       {"inp_vs_xi", io::to_json(r.walk_check->inp_vs_xi)}};
  } else {
    j["walk_check"] = nullptr;
  }
  return j;
}

/// File names written by `emit_plot_data`.
inline constexpr std::string_view report_file = "report.json";
inline constexpr std::array<std::string_view, 4> plot_files{"series.csv", "ecdf.csv", "spectra.csv", "ensembles.csv"};

/// Writes report.json and, for a non-empty label set, the plot tables:
///   series.csv     date,<label>...
///   ecdf.csv       series,x,F
///   spectra.csv    series,frequency,amplitude,power
///   ensembles.csv  kind,trace,d_s,var_ds
/// Returns the paths written, in that order.
inline std::vector<std::filesystem::path> emit_plot_data(const AnalysisReport& report,
                                                         const std::vector<std::string>& series_set,
                                                         const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw io_error("cannot create output directory '" + dir.string() + "'");
  }
  std::vector<std::filesystem::path> written;
  auto open = [&](std::string_view name) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write '" + path.string() + "'");
    written.push_back(path);
    return out;
  };
  auto close = [&](std::ofstream& out) {
    out.flush();
    if (!out) throw io_error("write failed for '" + written.back().string() + "'");
  };

  {
    auto out = open(report_file);
    out << to_json(report).dump(2) << '\n';
    close(out);
  }
  if (series_set.empty()) return written;

  std::vector<const SeriesReport*> chosen;
  for (const auto& label : series_set) {
    const auto* s = report.find(label);
    if (!s) throw input_error("emit_plot_data: unknown series '" + label + "'");
    chosen.push_back(s);
  }
  using io::format_number;
  {
    auto out = open(plot_files[0]);
    std::vector<const TimeSeries*> cols;
    for (const auto* s : chosen) cols.push_back(&s->series);
    io::write_series_csv(out, cols);
    close(out);
  }
  {
    auto out = open(plot_files[1]);
    out << "series,x,F\n";
    for (const auto* s : chosen) {
      for (const auto& [x, f] : stats::empirical_cdf(s->series.view()).steps()) {
        out << s->label() << ',' << format_number(x) << ',' << format_number(f) << '\n';
      }
    }
    close(out);
  }
  {
    auto out = open(plot_files[2]);
    out << "series,frequency,amplitude,power\n";
    for (const auto* s : chosen) {
      const auto& sp = s->spectrum.spectrum;
      for (std::size_t k = 0; k < sp.size(); ++k) {
        out << s->label() << ',' << format_number(sp.frequencies[k]) << ',' << format_number(sp.amplitude[k]) << ','
            << format_number(sp.power[k]) << '\n';
      }
    }
    close(out);
  }
  {
    auto out = open(plot_files[3]);
    out << "kind,trace,d_s,var_ds\n";
    for (const auto* e : {&report.white, &report.brownian}) {
      for (std::size_t k = 0; k < e->traces.size(); ++k) {
        out << to_string(e->kind) << ',' << k << ',' << format_number(e->traces[k].d_s) << ','
            << format_number(e->traces[k].var_ds) << '\n';
      }
    }
    close(out);
  }
  return written;
}

inline std::vector<std::string> series_labels(const AnalysisReport& r) {
  std::vector<std::string> out;
  for (const auto& s : r.series) out.push_back(s.label());
  return out;
}

}  // namespace rwalk

#endif  // RWALK_PIPELINE_HPP
