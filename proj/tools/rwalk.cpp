// rwalk: random-walk diagnostics for daily operational series.
//
// Exit codes: 0 ok, 1 input error (including bad command lines), 2 numeric degeneracy.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwalk/rwalk.hpp"

namespace {

using rwalk::io::ojson;

struct SchemaFlags {
  std::string date_column = "date";
  std::string adm = "adm";
  std::string dis = "dis";
  std::string inp = "inp";
  std::vector<std::string> units;  // LABEL:INP_COLUMN:STAY_SUM_COLUMN
  std::string delimiter = ",";
  bool mdy = false;
};

struct Options {
  SchemaFlags schema;
  std::uint64_t seed = 5489;
  std::uint64_t stream_base = 0;
  std::size_t m = 100;
  double alpha = 0.05;
  std::string window = "hann";
  std::string gap_intervals = "paper";
  std::string format = "json";
  unsigned threads = 1;
  int beds = 192;
  std::optional<double> new_year_threshold;
  bool anchor_walk = false;
  std::string output;  // file; empty means stdout
};

std::optional<std::string> column_or_none(const std::string& name) {
  if (name.empty() || name == "none") return std::nullopt;
  return name;
}

rwalk::CsvSchema make_schema(const SchemaFlags& f) {
  rwalk::CsvSchema s;
  s.date_column = f.date_column;
  s.adm = column_or_none(f.adm);
  s.dis = column_or_none(f.dis);
  s.inp = column_or_none(f.inp);
  if (f.delimiter.size() != 1) throw rwalk::input_error("--delimiter must be a single character");
  s.delimiter = f.delimiter == "\\t" ? '\t' : f.delimiter[0];
  s.date_format = f.mdy ? rwalk::DateFormat::mdy : rwalk::DateFormat::iso;
  for (const auto& spec : f.units) {
    const auto parts = rwalk::io::split(spec, ':');
    if (parts.size() != 3) throw rwalk::input_error("--unit expects LABEL:INP_COLUMN:STAY_SUM_COLUMN, got '" + spec + "'");
    s.units.push_back({std::string(parts[0]), std::string(parts[1]), std::string(parts[2])});
  }
  return s;
}

rwalk::AnalysisConfig make_config(const Options& o) {
  rwalk::AnalysisConfig c;
  c.seed = o.seed;
  c.stream_base = o.stream_base;
  c.m = o.m;
  c.alpha = o.alpha;
  c.window = rwalk::spectral::parse_window(o.window);
  c.gap_mode = rwalk::parse_gap_mode(o.gap_intervals);
  c.new_year_threshold = o.new_year_threshold;
  c.schema = make_schema(o.schema);
  c.beds = o.beds;
  c.anchor_walk = o.anchor_walk;
  c.threads = o.threads;
  c.validate();
  return c;
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw rwalk::io_error("cannot write '" + path + "'");
  fn(out);
  out.flush();
  if (!out) throw rwalk::io_error("write failed for '" + path + "'");
}

ojson read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rwalk::input_error("cannot open '" + path + "'");
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw rwalk::input_error(path + ": " + e.what());
  }
}

void add_schema_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--date-column", o.schema.date_column, "Date column name")->capture_default_str();
  cmd->add_option("--adm", o.schema.adm, "Admissions column ('none' to skip)")->capture_default_str();
  cmd->add_option("--dis", o.schema.dis, "Discharges column ('none' to skip)")->capture_default_str();
  cmd->add_option("--inp", o.schema.inp, "Inpatients column ('none' to skip)")->capture_default_str();
  cmd->add_option("--unit", o.schema.units, "Unit columns as LABEL:INP_COLUMN:STAY_SUM_COLUMN (repeatable)");
  cmd->add_option("--delimiter", o.schema.delimiter, "Field delimiter")->capture_default_str();
  cmd->add_flag("--mdy", o.schema.mdy, "Dates are mm/dd/yyyy instead of ISO-8601");
  cmd->add_option("--beds", o.beds, "Bed capacity")->capture_default_str();
  cmd->add_option("--gap-intervals", o.gap_intervals, "Gap filling: paper (step = change/g) or span (change/(g+1))")
      ->check(CLI::IsMember({"paper", "span"}))
      ->capture_default_str();
  cmd->add_option("--new-year-threshold", o.new_year_threshold, "January-1 outlier threshold (default 2 x beds)");
}

void add_seed_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--stream-base", o.stream_base, "First stream id; trace k uses stream-base + k")->capture_default_str();
}

void add_analysis_options(CLI::App* cmd, Options& o) {
  add_seed_options(cmd, o);
  cmd->add_option("--m", o.m, "Traces per calibration ensemble")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Significance level, in (0, 1/6]")->capture_default_str();
  cmd->add_option("--window", o.window, "Spectral window")->check(CLI::IsMember({"hann", "hamming"}))->capture_default_str();
  cmd->add_option("--threads", o.threads, "Calibration worker threads (0 = all cores)")->capture_default_str();
  cmd->add_flag("--anchor-walk", o.anchor_walk, "Start the reconstructed walk at the first InP value");
}

void add_format_option(CLI::App* cmd, Options& o, const std::string& def) {
  o.format = def;
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("-o,--out", o.output, "Output file (default stdout)");
}

// ---- ingest ----------------------------------------------------------------

void run_ingest(const Options& o, const std::string& input, const std::string& log_path) {
  const auto cfg = make_config(o);
  auto loaded = rwalk::load_input(cfg, input);
  const auto gaps = loaded.bundle.gaps;
  auto warnings = loaded.bundle.warnings;
  const auto t0 = loaded.bundle.t0();
  const auto n = loaded.bundle.size();
  auto prepared = rwalk::prepare_series(cfg, std::move(loaded.bundle));
  warnings.insert(warnings.end(), prepared.warnings.begin(), prepared.warnings.end());

  if (!log_path.empty()) {
    write_output(log_path, [&](std::ostream& os) { rwalk::write_corrections_jsonl(os, prepared.corrections); });
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  if (o.format == "csv") {
    write_output(o.output, [&](std::ostream& os) {
      std::vector<const rwalk::TimeSeries*> cols;
      for (const auto& s : prepared.series) cols.push_back(&s);
      rwalk::io::write_series_csv(os, cols);
    });
    return;
  }
  ojson j;
  j["input"] = loaded.name;
  j["input_hash"] = loaded.hash;
  j["t0"] = t0.iso();
  j["n"] = n;
  ojson g = ojson::array();
  for (const auto& gap : gaps) g.push_back(gap.describe() + " in " + gap.series);
  j["gaps"] = g;
  j["warnings"] = warnings;
  std::map<std::string, std::size_t> by_rule;
  for (const auto& c : prepared.corrections) ++by_rule[c.rule];
  j["corrections"] = by_rule;
  ojson labels = ojson::array();
  for (const auto& s : prepared.series) labels.push_back(s.label);
  j["series"] = labels;
  write_output(o.output, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

// ---- analyze / report ------------------------------------------------------

void write_summary_csv(std::ostream& os, const rwalk::AnalysisReport& r) {
  using rwalk::io::format_number;
  os << "series,n,hl,hl_low,hl_high,runs,p_rrd,jb_p,jb_gel_p,d_s,sd_ds,slope,peak_ratio,"
        "lambda_white,verdict_white,lambda_brownian,verdict_brownian,classification\n";
  for (const auto& s : r.series) {
    os << s.label() << ',' << s.series.size() << ',' << format_number(s.location.median) << ','
       << format_number(s.location.ci_low) << ',' << format_number(s.location.ci_high) << ',' << s.runs.n_runs << ','
       << format_number(s.runs.p_rrd) << ',' << format_number(s.jarque_bera.p) << ','
       << format_number(s.jarque_bera_gel.p) << ',' << format_number(s.fractal.d_s) << ','
       << format_number(s.fractal.sd()) << ',' << format_number(s.spectrum.fit.slope) << ','
       << format_number(s.spectrum.peak_ratio) << ',' << format_number(s.vs_white.lambda) << ','
       << rwalk::to_string(s.vs_white.verdict) << ',' << format_number(s.vs_brownian.lambda) << ','
       << rwalk::to_string(s.vs_brownian.verdict) << ',' << s.classification << '\n';
  }
}

void run_analyze(const Options& o, const std::string& input) {
  const auto report = rwalk::run_pipeline(make_config(o), input);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  write_output(o.output, [&](std::ostream& os) {
    if (o.format == "csv") write_summary_csv(os, report);
    else os << rwalk::to_json(report).dump(2) << '\n';
  });
}

void run_report(const Options& o, const std::string& input, const std::string& dir,
                const std::vector<std::string>& series, bool json_only) {
  const auto report = rwalk::run_pipeline(make_config(o), input);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  const auto set = json_only ? std::vector<std::string>{} : (series.empty() ? rwalk::series_labels(report) : series);
  for (const auto& p : rwalk::emit_plot_data(report, set, dir)) std::cout << p.string() << '\n';
}

// ---- calibrate / compare ---------------------------------------------------

rwalk::Innovation make_innovation(const std::string& kind, double sigma) {
  if (kind == "uniform") return rwalk::UniformInnovation{};
  if (!(sigma > 0.0)) throw rwalk::input_error("--sigma must be > 0");
  return rwalk::GaussianInnovation{sigma};
}

void run_calibrate(const Options& o, const std::string& kind, std::size_t n, const std::string& innovation,
                   double sigma) {
  rwalk::CalibrationOptions c;
  c.seed = o.seed;
  c.stream_base = o.stream_base;
  c.threads = o.threads;
  c.innovation = make_innovation(innovation, sigma);
  const auto e = rwalk::calibrate(rwalk::parse_noise_kind(kind), o.m, n, c);
  write_output(o.output, [&](std::ostream& os) {
    if (o.format == "csv") {
      os << "trace,stream,d_s,var_ds\n";
      for (std::size_t k = 0; k < e.traces.size(); ++k) {
        os << k << ',' << (o.stream_base + k) << ',' << rwalk::io::format_number(e.traces[k].d_s) << ','
           << rwalk::io::format_number(e.traces[k].var_ds) << '\n';
      }
    } else {
      os << rwalk::io::to_json(e).dump(2) << '\n';
    }
  });
}

void run_compare(const Options& o, const std::string& a_path, const std::string& b_path) {
  const auto a = rwalk::io::summary_from_json(read_json_file(a_path), a_path);
  const auto b = rwalk::io::summary_from_json(read_json_file(b_path), b_path);
  const auto r = rwalk::compare_ds(a, b, o.alpha);
  ojson j;
  j["a"] = {{"source", a.label}, {"mean", a.mean}, {"variance", a.variance}};
  j["b"] = {{"source", b.label}, {"mean", b.mean}, {"variance", b.variance}};
  j["result"] = rwalk::io::to_json(r);
  write_output(o.output, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

// ---- simulate --------------------------------------------------------------

void run_simulate(const Options& o, const std::string& kind, std::size_t n, std::size_t m, const std::string& innovation,
                  double sigma, double mu, double lambda) {
  if (kind == "hospital") {
    rwalk::demo::HospitalOptions h;
    h.n = n;
    h.seed = o.seed;
    h.stream = o.stream_base;
    h.beds = o.beds;
    const auto sim = rwalk::demo::simulate_hospital(h);
    write_output(o.output, [&](std::ostream& os) { rwalk::demo::write_hospital_csv(os, sim, h); });
    return;
  }
  if (n < 2) throw rwalk::input_error("--n must be >= 2");
  if (m < 1) throw rwalk::input_error("--m must be >= 1");
  std::vector<std::vector<double>> traces;
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint64_t stream = o.stream_base + k;
    if (kind == "cauchy") {
      if (!(lambda > 0.0)) throw rwalk::input_error("--lambda must be > 0");
      traces.push_back(rwalk::cauchy_trace(n, mu, lambda, o.seed, stream));
    } else {
      const rwalk::NoiseSpec spec{rwalk::parse_noise_kind(kind), make_innovation(innovation, sigma), n, o.seed, stream};
      traces.push_back(rwalk::generate_noise(spec).values);
    }
  }
  write_output(o.output, [&](std::ostream& os) {
    os << "index";
    for (std::size_t k = 0; k < m; ++k) os << ",trace_" << k;
    os << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      os << i;
      for (const auto& t : traces) os << ',' << rwalk::io::format_number(t[i]);
      os << '\n';
    }
  });
}

// ---- spectrum --------------------------------------------------------------

std::vector<double> read_column(const std::string& path, std::string column, char delimiter) {
  std::ifstream in(path);
  if (!in) throw rwalk::input_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw rwalk::input_error(path + ": empty file");
  std::vector<std::string> header;
  for (auto f : rwalk::io::split(line, delimiter)) header.emplace_back(f);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (column.empty() ? (header[i] != "date" && header[i] != "index") : header[i] == column) {
      col = i;
      break;
    }
  }
  if (col == header.size()) {
    throw rwalk::input_error(path + ": column '" + (column.empty() ? std::string("<value>") : column) + "' not found");
  }
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (rwalk::io::trim(line).empty()) continue;
    const auto fields = rwalk::io::split(line, delimiter);
    if (fields.size() != header.size()) throw rwalk::input_error("row " + std::to_string(line_no) + ": wrong field count");
    const auto v = rwalk::io::parse_cell(fields[col]);
    if (!v || rwalk::is_missing(*v)) {
      throw rwalk::input_error("row " + std::to_string(line_no) + ": missing or unparsable value");
    }
    values.push_back(*v);
  }
  return values;
}

void run_spectrum(const Options& o, const std::string& input, const std::string& column, const std::string& summary,
                  double high_cut) {
  const auto x = read_column(input, column, make_schema(o.schema).delimiter);
  rwalk::spectral::SlopeOptions so;
  so.high_cut = high_cut;
  const auto a = rwalk::spectral::analyze_spectrum(x, rwalk::spectral::parse_window(o.window), 1.0, so);
  const auto j = rwalk::io::to_json(a);
  if (!summary.empty()) write_output(summary, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  write_output(o.output, [&](std::ostream& os) {
    if (o.format == "json") {
      os << j.dump(2) << '\n';
      return;
    }
    using rwalk::io::format_number;
    os << "frequency,amplitude,power\n";
    const auto& s = a.spectrum;
    for (std::size_t k = 0; k < s.size(); ++k) {
      os << format_number(s.frequencies[k]) << ',' << format_number(s.amplitude[k]) << ',' << format_number(s.power[k])
         << '\n';
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rwalk: random-walk diagnostics for daily series (fractal dimension, nonparametric tests, spectra)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rwalk::tool_version));

  Options o;
  std::string input, log_path, out_dir, kind = "white", innovation = "gaussian", column, summary, a_path, b_path;
  std::vector<std::string> series;
  bool json_only = false;
  std::size_t n = 1329, m_sim = 1;
  double sigma = 1.0, mu = 0.0, lambda = 1.0, high_cut = 0.5;

  auto* ingest = app.add_subcommand("ingest", "Load, correct and gap-fill a daily CSV; emit series or a summary");
  ingest->add_option("input", input, "Input CSV")->required();
  ingest->add_option("--log", log_path, "Write corrections as JSON lines to this file");
  add_schema_options(ingest, o);
  add_format_option(ingest, o, "csv");

  auto* analyze = app.add_subcommand("analyze", "Run the full analysis and print the report");
  analyze->add_option("input", input, "Input CSV")->required();
  add_schema_options(analyze, o);
  add_analysis_options(analyze, o);
  add_format_option(analyze, o, "json");

  auto* report = app.add_subcommand("report", "Run the full analysis and write report.json plus plot tables");
  report->add_option("input", input, "Input CSV")->required();
  report->add_option("--out-dir", out_dir, "Output directory")->required();
  report->add_option("--series", series, "Series to tabulate (default: all)")->delimiter(',');
  report->add_flag("--json-only", json_only, "Write report.json only");
  add_schema_options(report, o);
  add_analysis_options(report, o);

  auto* calibrate = app.add_subcommand("calibrate", "Build a white or Brownian calibration ensemble");
  calibrate->add_option("--kind", kind, "Noise kind")->check(CLI::IsMember({"white", "brownian"}))->capture_default_str();
  calibrate->add_option("--n", n, "Points per trace")->capture_default_str();
  calibrate->add_option("--innovation", innovation, "Innovation law")
      ->check(CLI::IsMember({"gaussian", "uniform"}))
      ->capture_default_str();
  calibrate->add_option("--sigma", sigma, "Gaussian innovation sd")->capture_default_str();
  calibrate->add_option("--m", o.m, "Number of traces")->capture_default_str();
  calibrate->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_seed_options(calibrate, o);
  add_format_option(calibrate, o, "json");

  auto* compare = app.add_subcommand("compare", "Compare two D_s estimates or ensembles (Vysochanskij-Petunin)");
  compare->add_option("a", a_path, "Ensemble or estimate JSON")->required();
  compare->add_option("b", b_path, "Ensemble or estimate JSON")->required();
  compare->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
  compare->add_option("-o,--out", o.output, "Output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Write synthetic traces (white, brownian, cauchy) or a demo hospital CSV");
  simulate->add_option("--kind", kind, "What to simulate")
      ->check(CLI::IsMember({"white", "brownian", "cauchy", "hospital"}))
      ->capture_default_str();
  simulate->add_option("--n", n, "Points per trace")->capture_default_str();
  simulate->add_option("--m", m_sim, "Number of traces")->capture_default_str();
  simulate->add_option("--innovation", innovation, "Innovation law")
      ->check(CLI::IsMember({"gaussian", "uniform"}))
      ->capture_default_str();
  simulate->add_option("--sigma", sigma, "Gaussian innovation sd")->capture_default_str();
  simulate->add_option("--mu", mu, "Cauchy location")->capture_default_str();
  simulate->add_option("--lambda", lambda, "Cauchy scale")->capture_default_str();
  simulate->add_option("--beds", o.beds, "Bed capacity (hospital)")->capture_default_str();
  add_seed_options(simulate, o);
  simulate->add_option("-o,--out", o.output, "Output file (default stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "Spectral density of one CSV column with a log-log slope fit");
  spectrum->add_option("input", input, "Input CSV")->required();
  spectrum->add_option("--column", column, "Column to analyze (default: first non-date column)");
  spectrum->add_option("--window", o.window, "Window")->check(CLI::IsMember({"hann", "hamming"}))->capture_default_str();
  spectrum->add_option("--summary", summary, "Also write the JSON slope summary here");
  spectrum->add_option("--high-cut", high_cut, "Fit bins up to this fraction of Nyquist")->capture_default_str();
  spectrum->add_option("--delimiter", o.schema.delimiter, "Field delimiter")->capture_default_str();
  add_format_option(spectrum, o, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (ingest->parsed()) run_ingest(o, input, log_path);
    else if (analyze->parsed()) run_analyze(o, input);
    else if (report->parsed()) run_report(o, input, out_dir, series, json_only);
    else if (calibrate->parsed()) run_calibrate(o, kind, n, innovation, sigma);
    else if (compare->parsed()) run_compare(o, a_path, b_path);
    else if (simulate->parsed()) run_simulate(o, kind, n, m_sim, innovation, sigma, mu, lambda);
    else if (spectrum->parsed()) run_spectrum(o, input, column, summary, high_cut);
  } catch (const rwalk::degenerate_error& e) {
    std::cerr << "rwalk: " << e.what() << '\n';
    return 2;
  } catch (const rwalk::input_error& e) {
    std::cerr << "rwalk: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rwalk: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
