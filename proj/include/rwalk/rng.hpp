#ifndef RWALK_RNG_HPP
#define RWALK_RNG_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>

namespace rwalk::rng {

/// Anything that yields 32-bit words and advances on every call.
template <class G>
concept word_source = requires(G g) {
  { g.next_u32() } -> std::same_as<std::uint32_t>;
};

/// 32-bit Mersenne Twister, period 2^19937 - 1, with the 2002 improved
/// initialization (init_genrand / init_by_array).
class Mt19937 {
 public:
  static constexpr std::size_t state_size = 624;

  explicit Mt19937(std::uint32_t s = 5489u) { init_genrand(s); }

  explicit Mt19937(std::span<const std::uint32_t> key) {
    init_genrand(19650218u);
    std::size_t i = 1, j = 0;
    for (std::size_t k = std::max(state_size, key.size()); k > 0; --k) {
      mt_[i] = (mt_[i] ^ ((mt_[i - 1] ^ (mt_[i - 1] >> 30)) * 1664525u)) + key[j] +
               static_cast<std::uint32_t>(j);
      ++i;
      ++j;
      if (i >= state_size) {
        mt_[0] = mt_[state_size - 1];
        i = 1;
      }
      if (j >= key.size()) j = 0;
    }
    for (std::size_t k = state_size - 1; k > 0; --k) {
      mt_[i] = (mt_[i] ^ ((mt_[i - 1] ^ (mt_[i - 1] >> 30)) * 1566083941u)) -
               static_cast<std::uint32_t>(i);
      ++i;
      if (i >= state_size) {
        mt_[0] = mt_[state_size - 1];
        i = 1;
      }
    }
    mt_[0] = 0x80000000u;
    index_ = state_size;
  }

  std::uint32_t next_u32() {
    if (index_ >= state_size) twist();
    std::uint32_t y = mt_[index_++];
    y ^= (y >> 11);
    y ^= (y << 7) & 0x9d2c5680u;
    y ^= (y << 15) & 0xefc60000u;
    y ^= (y >> 18);
    return y;
  }

  std::size_t index() const { return index_; }
  const std::array<std::uint32_t, state_size>& words() const { return mt_; }

  bool operator==(const Mt19937&) const = default;

 private:
  void init_genrand(std::uint32_t s) {
    mt_[0] = s;
    for (std::size_t i = 1; i < state_size; ++i) {
      mt_[i] = 1812433253u * (mt_[i - 1] ^ (mt_[i - 1] >> 30)) + static_cast<std::uint32_t>(i);
    }
    index_ = state_size;
  }

  void twist() {
    constexpr std::uint32_t upper = 0x80000000u;
    constexpr std::uint32_t lower = 0x7fffffffu;
    constexpr std::uint32_t matrix_a = 0x9908b0dfu;
    constexpr std::size_t m = 397;
    for (std::size_t k = 0; k < state_size; ++k) {
      const std::uint32_t y = (mt_[k] & upper) | (mt_[(k + 1) % state_size] & lower);
      mt_[k] = mt_[(k + m) % state_size] ^ (y >> 1) ^ ((y & 1u) ? matrix_a : 0u);
    }
    index_ = 0;
  }

  std::array<std::uint32_t, state_size> mt_{};
  std::size_t index_ = state_size;
};

struct SeedRecord {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  bool operator==(const SeedRecord&) const = default;
};

inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Generator state plus the (master, stream) pair that produced it. Single
/// owner; move it between threads, never share it.
class GeneratorState {
 public:
  using result_type = std::uint32_t;

  GeneratorState(Mt19937 engine, SeedRecord record) : engine_(engine), record_(record) {}

  std::uint32_t next_u32() { return engine_.next_u32(); }

  // UniformRandomBitGenerator, so std algorithms (shuffle etc.) accept it.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u32(); }

  const SeedRecord& seed_record() const { return record_; }
  const Mt19937& engine() const { return engine_; }

 private:
  Mt19937 engine_;
  SeedRecord record_;
};

/// Stream 0 with a 32-bit master seed is plain init_genrand(master), so the
/// reference MT19937 sequences are reproduced. Every other (master, stream)
/// pair is hashed into a 4-word init_by_array key.
inline GeneratorState seed(std::uint64_t master, std::uint64_t stream = 0) {
  const SeedRecord record{master, stream};
  if (stream == 0 && master <= std::numeric_limits<std::uint32_t>::max()) {
    return {Mt19937(static_cast<std::uint32_t>(master)), record};
  }
  std::uint64_t x = master ^ (0xd1b54a32d192ed03ull * (stream + 1));
  const std::uint64_t a = splitmix64(x);
  const std::uint64_t b = splitmix64(x);
  const std::array<std::uint32_t, 4> key{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return {Mt19937(std::span<const std::uint32_t>(key)), record};
}

/// 53-bit resolution uniform on [0, 1); two words per draw.
template <word_source G>
double uniform01(G& g) {
  const std::uint32_t a = g.next_u32() >> 5;
  const std::uint32_t b = g.next_u32() >> 6;
  return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);
}

template <word_source G>
double uniform_ab(G& g, double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("uniform_ab: requires finite a < b");
  }
  return a + (b - a) * uniform01(g);
}

/// Box-Muller map of two uniforms to two N(0,1) deviates:
/// (sin(2 pi r1), cos(2 pi r1)) * sqrt(-2 ln r2).
inline std::pair<double, double> box_muller(double r1, double r2) {
  const double radius = std::sqrt(-2.0 * std::log(r2));
  const double angle = 2.0 * std::numbers::pi * r1;
  return {std::sin(angle) * radius, std::cos(angle) * radius};
}

/// Two independent N(0,1) deviates. r2 = 0 is re-drawn.
template <word_source G>
std::pair<double, double> normal_pair(G& g) {
  const double r1 = uniform01(g);
  double r2 = uniform01(g);
  while (r2 == 0.0) r2 = uniform01(g);
  return box_muller(r1, r2);
}

/// Inversion of the Cauchy CDF: mu + lambda tan(pi (u - 1/2)).
inline double cauchy_from_uniform(double u, double mu, double lambda) {
  return mu + lambda * std::tan(std::numbers::pi * (u - 0.5));
}

template <word_source G>
double cauchy_sample(G& g, double mu, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("cauchy_sample: lambda must be > 0");
  double u = uniform01(g);
  while (u == 0.0 || u == 1.0) u = uniform01(g);
  return cauchy_from_uniform(u, mu, lambda);
}

/// Knuth's multiplication method; adequate for the small means used by the
/// synthetic hospital fixtures.
template <word_source G>
int poisson_sample(G& g, double mean) {
  if (!(mean >= 0.0) || mean > 50.0) throw std::invalid_argument("poisson_sample: mean must be in [0, 50]");
  const double limit = std::exp(-mean);
  int k = 0;
  double p = uniform01(g);
  while (p > limit) {
    ++k;
    p *= uniform01(g);
  }
  return k;
}

}  // namespace rwalk::rng

#endif  // RWALK_RNG_HPP
