#ifndef RWALK_NOISE_HPP
#define RWALK_NOISE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "rwalk/rng.hpp"
#include "rwalk/series.hpp"

namespace rwalk {

enum class NoiseKind { white, brownian };

inline std::string_view to_string(NoiseKind k) { return k == NoiseKind::white ? "white" : "brownian"; }

inline NoiseKind parse_noise_kind(std::string_view s) {
  if (s == "white") return NoiseKind::white;
  if (s == "brownian") return NoiseKind::brownian;
  throw std::invalid_argument("unknown noise kind '" + std::string(s) + "'");
}

struct GaussianInnovation {
  double sigma = 1.0;
};
/// U[-1, 1]
struct UniformInnovation {};

using Innovation = std::variant<GaussianInnovation, UniformInnovation>;

struct NoiseSpec {
  NoiseKind kind = NoiseKind::white;
  Innovation innovation = GaussianInnovation{};
  std::size_t n = 0;
  std::uint64_t seed = 5489;
  std::uint64_t stream = 0;
};

namespace detail {

inline void validate(const NoiseSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("noise: n must be >= 2");
  if (const auto* g = std::get_if<GaussianInnovation>(&spec.innovation)) {
    if (!(g->sigma > 0.0)) throw std::invalid_argument("noise: sigma must be > 0");
  }
}

}  // namespace detail

/// n iid innovations drawn from spec's (seed, stream). Gaussian draws use both
/// Box-Muller deviates in order (sin, cos), so n draws consume ceil(n/2) pairs.
inline std::vector<double> innovations(const NoiseSpec& spec) {
  detail::validate(spec);
  auto state = rng::seed(spec.seed, spec.stream);
  std::vector<double> out(spec.n);
  std::visit(
      [&](const auto& inn) {
        using T = std::decay_t<decltype(inn)>;
        if constexpr (std::is_same_v<T, GaussianInnovation>) {
          for (std::size_t i = 0; i < spec.n; i += 2) {
            const auto [z0, z1] = rng::normal_pair(state);
            out[i] = inn.sigma * z0;
            if (i + 1 < spec.n) out[i + 1] = inn.sigma * z1;
          }
        } else {
          for (auto& v : out) v = rng::uniform_ab(state, -1.0, 1.0);
        }
      },
      spec.innovation);
  return out;
}

inline TimeSeries white_noise(const NoiseSpec& spec) {
  if (spec.kind != NoiseKind::white) throw std::invalid_argument("white_noise: spec.kind must be white");
  return TimeSeries{"white", Date{}, innovations(spec)};
}

/// b[0] = 0, b[i] = b[i-1] + g[i-1]. The last innovation is not used.
inline std::vector<double> brownian_from_innovations(std::span<const double> g) {
  std::vector<double> b(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) b[i] = b[i - 1] + g[i - 1];
  return b;
}

/// Walk over the white trace of the same (seed, stream).
inline TimeSeries brownian_noise(const NoiseSpec& spec) {
  if (spec.kind != NoiseKind::brownian) {
    throw std::invalid_argument("brownian_noise: spec.kind must be brownian");
  }
  return TimeSeries{"brownian", Date{}, brownian_from_innovations(innovations(spec))};
}

inline TimeSeries generate_noise(const NoiseSpec& spec) {
  return spec.kind == NoiseKind::white ? white_noise(spec) : brownian_noise(spec);
}

inline std::vector<double> cauchy_trace(std::size_t n, double mu, double lambda, std::uint64_t seed,
                                        std::uint64_t stream = 0) {
  auto state = rng::seed(seed, stream);
  std::vector<double> out(n);
  for (auto& v : out) v = rng::cauchy_sample(state, mu, lambda);
  return out;
}

inline void check_scale(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("cauchy: lambda must be > 0");
}

inline double cauchy_pdf(double x, double mu, double lambda) {
  check_scale(lambda);
  const double d = x - mu;
  return lambda / (std::numbers::pi * (lambda * lambda + d * d));
}

inline double cauchy_cdf(double x, double mu, double lambda) {
  check_scale(lambda);
  return std::atan((x - mu) / lambda) / std::numbers::pi + 0.5;
}

inline double cauchy_quantile(double p, double mu, double lambda) {
  check_scale(lambda);
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("cauchy_quantile: p must be in (0, 1)");
  return rng::cauchy_from_uniform(p, mu, lambda);
}

}  // namespace rwalk

#endif  // RWALK_NOISE_HPP
