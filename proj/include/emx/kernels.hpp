#pragma once

#include <cstdint>
#include <string_view>

#include "emx/types.hpp"

namespace emx {

enum class KernelKind { Rational, SpectralRational, Fourier, Laplace, CauchySquared };

/// Parameter space X: the closed unit disk or a real interval [lo, hi].
struct Domain {
  enum class Kind { UnitDisk, Interval };
  Kind kind = Kind::UnitDisk;
  double lo = -1.0;
  double hi = 1.0;

  static Domain unit_disk() { return {Kind::UnitDisk, -1.0, 1.0}; }
  static Domain interval(double lo, double hi) { return {Kind::Interval, lo, hi}; }

  bool is_real() const { return kind == Kind::Interval; }
  bool contains(Complex x, double slack = 0.0) const;
};

struct KernelDescriptor {
  KernelKind kind = KernelKind::Rational;
  Domain domain;

  bool has_pole() const { return kind == KernelKind::Rational || kind == KernelKind::SpectralRational; }
};

std::string_view to_string(KernelKind kind);

/// Ground truth or recovered spikes: f(x) = sum_k w_k delta(x - x_k).
struct SpikeSignal {
  CVector locations;
  CVector weights;

  Eigen::Index size() const { return locations.size(); }
  /// Throws InvalidArgument unless sizes agree, n_x >= 1 and locations are distinct.
  void validate() const;
};

struct SampleSet {
  CVector points;
};

struct CollocationNodes {
  CVector nodes;
};

struct Observations {
  CVector exact;
  CVector noisy;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// G = [g(s_j, a_t)] together with its column-normalized form.
struct CollocationSystem {
  CMatrix G;
  CMatrix G_hat;
  RVector column_norms;
  CVector nodes;  // diagonal of Lambda
};

enum class ChebyshevKind { First, Second };

enum class PresetId { Rational, Spectral, Fourier, Laplace, Deconvolution };

std::string_view to_string(PresetId id);
/// Accepts "rational", "spectral", "fourier", "laplace", "deconv"/"deconvolution".
PresetId parse_preset(std::string_view name);

Complex eval_kernel(const KernelDescriptor& kernel, Complex s, Complex x);

CollocationNodes uniform_circle_nodes(int n_a);
CollocationNodes chebyshev_nodes(int n_a, double lo, double hi,
                                 ChebyshevKind kind = ChebyshevKind::First);

inline constexpr double kDefaultMatsubaraBeta = 30.0;

/// 40, 256, 128, 100 and 128 points respectively.
int default_sample_count(PresetId preset);

/// Sample generator for each of the five benchmark problems. The spectral
/// (Matsubara) grid is deterministic and ignores the seed; its n_s must be
/// even. n_s = 0 selects default_sample_count.
SampleSet generate_samples(PresetId preset, std::uint64_t rng_seed,
                           double beta = kDefaultMatsubaraBeta, int n_s = 0);

/// u_j = sum_k w_k g(s_j, x_k).
CVector synthesize(const KernelDescriptor& kernel, const SpikeSignal& signal, const SampleSet& samples);

/// Multiplicative noise u_j (1 + sigma Z_j) with real standard normal Z_j
/// drawn from the noise stream of `rng_seed`. The draw of Z does not depend
/// on sigma.
Observations add_noise(const CVector& exact, double sigma, std::uint64_t rng_seed);

/// Kernel matrix at arbitrary points: K[j][k] = g(s_j, x_k).
CMatrix kernel_matrix(const KernelDescriptor& kernel, const CVector& samples, const CVector& points);

CollocationSystem build_collocation_system(const KernelDescriptor& kernel, const SampleSet& samples,
                                           const CollocationNodes& nodes);

}  // namespace emx
