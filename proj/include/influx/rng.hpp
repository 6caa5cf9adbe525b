#pragma once

#include <cstdint>
#include <random>

namespace influx {

/// Generator algorithm identifier recorded in output metadata so reruns
/// elsewhere can match the distributional behavior.
inline constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64-streams";

/// splitmix64 mixing step. Used both as a seed scrambler and to derive
/// independent per-replica stream seeds from (seed, stream index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `stream` derived from a user seed. Streams are
/// statistically independent; replica results never depend on which worker
/// runs them.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(0x5851f42d4c957f2dULL + stream));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(stream_seed(seed, stream)) {}

  std::mt19937_64& engine() { return engine_; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform double in (lo, hi): resamples the (measure-zero) endpoint.
  double uniform_open(double lo, double hi) {
    double v = uniform(lo, hi);
    while (v == lo) v = uniform(lo, hi);
    return v;
  }

  /// Exponential with the given rate.
  double exponential(double rate) {
    return std::exponential_distribution<double>(rate)(engine_);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  bool bernoulli(double p) { return std::bernoulli_distribution(p)(engine_); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace influx
