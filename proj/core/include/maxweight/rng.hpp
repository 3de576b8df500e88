#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace maxweight {

/// Seeded deterministic random source used for every stochastic draw in the
/// library (state transitions, randomized policies, sampled multipliers).
///
/// The engine is std::mt19937_64, whose output sequence is fully specified by
/// the C++ standard, and uniform [0,1) doubles are produced by the fixed
/// mapping u = (x >> 11) * 2^-53. Together these make every trace
/// bit-reproducible across platforms and compilers; std::uniform_real_distribution
/// is deliberately avoided because its output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from (seed, stream_id) via a splitmix64 mix,
  /// so one logical seed can drive several non-overlapping streams.
  static Rng derive(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(splitmix64(seed + 0x9E3779B97F4A7C15ull * (stream_id + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0,1), 53 usable bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Exponential with the given mean (inverse-CDF of next_unit).
  double next_exponential(double mean) {
    return -mean * std::log1p(-next_unit());
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

/// Inverse-CDF draw from a finite distribution: returns the first index i
/// with u < p_0 + ... + p_i. Weights are expected to sum to ~1; any residual
/// mass from rounding goes to the last index.
inline int sample_index(std::span<const double> probs, double u) {
  double cum = 0.0;
  const int n = static_cast<int>(probs.size());
  for (int i = 0; i < n; ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return n - 1;
}

}  // namespace maxweight
