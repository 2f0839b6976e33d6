#pragma once

#include <cstdint>
#include <random>

namespace emx {

/// Seeded random source used for every stochastic quantity in the toolkit.
///
/// Generator "emx-rng v1": std::mt19937_64 (fully specified by the C++
/// standard) seeded with splitmix64(seed ^ splitmix64(stream)). Uniform and
/// normal variates are produced by the functions below rather than by
/// <random> distributions, whose output is implementation-defined, so a
/// given (seed, stream) pair yields the same numbers on every platform.
///
/// Streams: one per sample set and one per noise draw, so that changing the
/// noise seed never perturbs the sampling grid and vice versa.
class Rng {
 public:
  enum class Stream : std::uint64_t {
    Samples = 0x53414d504c4553ULL,  // "SAMPLES"
    Noise = 0x4e4f495345ULL,        // "NOISE"
    Test = 0x54455354ULL,           // "TEST"
  };

  static constexpr const char* kName = "emx-rng v1";

  Rng(std::uint64_t seed, Stream stream);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via the Marsaglia polar method.
  double normal();

  static std::uint64_t splitmix64(std::uint64_t x);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace emx
