#pragma once

#include <cstdint>
#include <random>

namespace rasqp {

/// Seedable pseudorandom stream owned by one solver run or one generator call.
///
/// `uniform()` consumes exactly one engine word.
/// Streams are reproducible for a given seed within one standard library
/// implementation; `normal()` relies on std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() { return normal_(engine_); }

  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

  /// Independent child stream; advances this stream by one word.
  Rng split() { return Rng(next() ^ 0x9E3779B97F4A7C15ULL); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rasqp
