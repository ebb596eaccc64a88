#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace planar {

/// splitmix64 step, used for seed mixing only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable sub-seed derivation: hash of (seed, index, purpose). Every random
/// stream in a run flows from one user seed through this, so results are
/// reproducible regardless of thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                                 std::string_view purpose) {
  std::uint64_t h = seed;
  splitmix64(h);
  h ^= 0x2545f4914f6cdd1dULL + index;
  splitmix64(h);
  for (unsigned char c : purpose) {
    h ^= c;
    splitmix64(h);
  }
  return splitmix64(h);
}

/// Deterministic RNG. mt19937_64 output is fully specified by the standard;
/// the distribution mappings are hand-rolled because the std distributions
/// are implementation-defined and would break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Modulo bias is irrelevant at the n we use (<< 2^64), keep it simple.
    return engine_() % n;
  }

  /// Standard normal via Box-Muller (polar form avoided to keep the
  /// consumption pattern fixed: exactly two engine draws per call pair).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace planar
