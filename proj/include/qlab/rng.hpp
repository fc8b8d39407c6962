#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qlab {

/// SplitMix64 finalizer: bijective 64-bit mixing with full avalanche.
/// Used both to derive independent RNG substreams from (seed, stream index)
/// and as the mixing core of the keyed function family in schemes.hpp.
inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Seeded random source wrapping std::mt19937_64.
///
/// All randomized operations in the library take an Rng& so that every
/// experiment is bit-reproducible from (global seed, trial index). Substreams
/// are derived by mixing the stream index into the seed, so parallel trials
/// never share generator state. Sampling routines are hand-rolled (rejection
/// for integers, Box-Muller for normals) to keep sequences independent of
/// standard-library distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(mix64(seed + 0x9e3779b97f4a7c15ULL)) {}

  /// Independent substream for trial/stream `stream` under a global seed.
  static Rng substream(uint64_t seed, uint64_t stream) {
    return Rng(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)));
  }

  uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), n >= 1, via rejection (no modulo bias).
  uint64_t uniform_int(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Standard normal via Box-Muller (deterministic given the stream).
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1, u2;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qlab
