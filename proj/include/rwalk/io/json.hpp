#ifndef RWALK_IO_JSON_HPP
#define RWALK_IO_JSON_HPP

#include <cstdint>
#include <string>
#include <variant>

#include <json.hpp>

#include "rwalk/error.hpp"
#include "rwalk/fractal.hpp"
#include "rwalk/noise.hpp"
#include "rwalk/spectral.hpp"
#include "rwalk/stats.hpp"

namespace rwalk::io {

using ojson = nlohmann::ordered_json;

inline ojson to_json(const Innovation& inn) {
  ojson j;
  if (const auto* g = std::get_if<GaussianInnovation>(&inn)) {
    j["type"] = "gaussian";
    j["sigma"] = g->sigma;
  } else {
    j["type"] = "uniform";
    j["low"] = -1.0;
    j["high"] = 1.0;
  }
  return j;
}

inline Innovation innovation_from_json(const ojson& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "gaussian") return GaussianInnovation{j.at("sigma").get<double>()};
  if (type == "uniform") return UniformInnovation{};
  throw input_error("unknown innovation type '" + type + "'");
}

inline ojson to_json(const FractalEstimate& e) {
  ojson j;
  j["d_s"] = e.d_s;
  j["var_ds"] = e.var_ds;
  j["sd"] = e.sd();
  j["n"] = e.n;
  j["n_prime"] = e.n_prime;
  j["length"] = e.length;
  j["degenerate"] = e.degenerate;
  return j;
}

inline ojson to_json(const CalibrationEnsemble& e, bool with_traces = true) {
  ojson j;
  j["kind"] = to_string(e.kind);
  j["m"] = e.m;
  j["n"] = e.n;
  j["seed"] = e.seed;
  j["stream_base"] = e.stream_base;
  j["innovation"] = to_json(e.innovation);
  j["mean_ds"] = e.mean_ds;
  j["var_between"] = e.var_between;
  j["var_total"] = e.var_total;
  j["sd_total"] = std::sqrt(e.var_total);
  if (with_traces) {
    ojson traces = ojson::array();
    for (const auto& t : e.traces) traces.push_back({{"d_s", t.d_s}, {"var_ds", t.var_ds}});
    j["traces"] = std::move(traces);
  }
  return j;
}

/// Restores an ensemble written by `to_json`; the summary is recomputed from
/// the traces when they are present.
inline CalibrationEnsemble ensemble_from_json(const ojson& j) {
  try {
    CalibrationEnsemble e;
    e.kind = parse_noise_kind(j.at("kind").get<std::string>());
    e.n = j.at("n").get<std::size_t>();
    e.seed = j.value("seed", std::uint64_t{0});
    e.stream_base = j.value("stream_base", std::uint64_t{0});
    if (j.contains("innovation")) e.innovation = innovation_from_json(j.at("innovation"));
    if (j.contains("traces")) {
      for (const auto& t : j.at("traces")) {
        FractalEstimate f;
        f.d_s = t.at("d_s").get<double>();
        f.var_ds = t.at("var_ds").get<double>();
        f.n = e.n;
        f.n_prime = e.n - 1;
        e.traces.push_back(f);
      }
      summarize(e);
    } else {
      e.m = j.at("m").get<std::size_t>();
      e.mean_ds = j.at("mean_ds").get<double>();
      e.var_between = j.at("var_between").get<double>();
      e.var_total = j.at("var_total").get<double>();
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw input_error(std::string("ensemble JSON: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw input_error(std::string("ensemble JSON: ") + ex.what());
  }
}

/// Accepts ensemble JSON (mean_ds, var_total) or single-estimate JSON (d_s, var_ds).
inline DsSummary summary_from_json(const ojson& j, std::string label = {}) {
  try {
    if (j.contains("mean_ds")) return DsSummary::of(ensemble_from_json(j), std::move(label));
    if (j.contains("d_s")) {
      return {std::move(label), j.at("d_s").get<double>(), j.at("var_ds").get<double>(), j.value("n", std::size_t{0})};
    }
  } catch (const nlohmann::json::exception& ex) {
    throw input_error(std::string("estimate JSON: ") + ex.what());
  }
  throw input_error("JSON holds neither an ensemble (mean_ds) nor an estimate (d_s)");
}

inline ojson to_json(const SignificanceResult& r) {
  ojson j;
  j["delta"] = r.delta;
  j["s_delta"] = r.s_delta;
  j["lambda"] = r.lambda;
  j["verdict"] = to_string(r.verdict);
  j["epsilon"] = r.epsilon ? ojson(*r.epsilon) : ojson(nullptr);
  if (r.verdict == Verdict::bounded) {
    j["p_bound"] = {SignificanceResult::bound_low, SignificanceResult::bound_high};
  }
  j["alpha"] = r.alpha;
  j["lambda_star"] = r.lambda_star;
  return j;
}

inline ojson to_json(const stats::RunsResult& r) {
  return {{"n_used", r.n_used}, {"n_above", r.n_above}, {"n_below", r.n_below}, {"n_runs", r.n_runs},
          {"median", r.median}, {"p_rrd", r.p_rrd},     {"p_left", r.p_left},   {"p_right", r.p_right},
          {"exact", r.exact}};
}

inline ojson to_json(const stats::LocationEstimate& r) {
  return {{"estimate", r.median}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high},
          {"confidence", r.confidence}, {"n", r.n}, {"exact", r.exact}};
}

inline ojson to_json(const stats::NormalityResult& r) {
  return {{"statistic", r.statistic}, {"p", r.p}, {"skewness", r.skewness},
          {"excess_kurtosis", r.excess_kurtosis}, {"n", r.n}};
}

inline ojson to_json(const stats::SmirnovResult& r) {
  return {{"d", r.d}, {"p", r.p}, {"n_a", r.n_a}, {"n_b", r.n_b}, {"statistic", r.statistic}};
}

inline ojson to_json(const stats::TheilFit& f) {
  return {{"alpha", {{"estimate", f.alpha.estimate}, {"low", f.alpha.low}, {"high", f.alpha.high}}},
          {"beta", {{"estimate", f.beta.estimate}, {"low", f.beta.low}, {"high", f.beta.high}}},
          {"rho_s", f.rho_s},
          {"p_rho", f.p_rho},
          {"n", f.n}};
}

inline ojson to_json(const spectral::SlopeFit& f) {
  return {{"slope", f.slope},         {"ci_low", f.ci_low}, {"ci_high", f.ci_high}, {"intercept", f.intercept},
          {"bins_used", f.bins_used}, {"f_low", f.f_low},   {"f_high", f.f_high}};
}

inline ojson to_json(const spectral::SpectrumAnalysis& a) {
  ojson j;
  j["window"] = spectral::to_string(a.spectrum.window);
  j["n_input"] = a.spectrum.n_input;
  j["n_padded"] = a.spectrum.n_padded;
  j["fit"] = to_json(a.fit);
  j["peak_ratio"] = a.peak_ratio;
  return j;
}

}  // namespace rwalk::io

#endif  // RWALK_IO_JSON_HPP
