#include "emx/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "emx/rng.hpp"

namespace emx {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

}  // namespace

bool Domain::contains(Complex x, double slack) const {
  if (kind == Kind::UnitDisk) return std::abs(x) <= 1.0 + slack;
  return std::abs(x.imag()) <= slack && x.real() >= lo - slack && x.real() <= hi + slack;
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Rational: return "rational";
    case KernelKind::SpectralRational: return "spectral-rational";
    case KernelKind::Fourier: return "fourier";
    case KernelKind::Laplace: return "laplace";
    case KernelKind::CauchySquared: return "cauchy-squared";
  }
  return "?";
}

std::string_view to_string(PresetId id) {
  switch (id) {
    case PresetId::Rational: return "rational";
    case PresetId::Spectral: return "spectral";
    case PresetId::Fourier: return "fourier";
    case PresetId::Laplace: return "laplace";
    case PresetId::Deconvolution: return "deconv";
  }
  return "?";
}

PresetId parse_preset(std::string_view name) {
  if (name == "rational") return PresetId::Rational;
  if (name == "spectral") return PresetId::Spectral;
  if (name == "fourier") return PresetId::Fourier;
  if (name == "laplace") return PresetId::Laplace;
  if (name == "deconv" || name == "deconvolution") return PresetId::Deconvolution;
  throw Error(ErrorCode::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

void SpikeSignal::validate() const {
  if (locations.size() != weights.size())
    throw Error(ErrorCode::SizeMismatch, "spike locations and weights differ in length");
  if (locations.size() < 1) throw Error(ErrorCode::InvalidArgument, "spike signal is empty");
  for (Eigen::Index i = 0; i < locations.size(); ++i)
    for (Eigen::Index j = i + 1; j < locations.size(); ++j)
      if (locations[i] == locations[j])
        throw Error(ErrorCode::InvalidArgument, "spike locations must be distinct");
}

Complex eval_kernel(const KernelDescriptor& kernel, Complex s, Complex x) {
  switch (kernel.kind) {
    case KernelKind::Rational:
    case KernelKind::SpectralRational: {
      if (s == x) {
        std::ostringstream msg;
        msg << "kernel pole: sample " << s << " coincides with location " << x;
        throw Error(ErrorCode::DomainError, msg.str());
      }
      return 1.0 / (s - x);
    }
    case KernelKind::Fourier:
      return std::exp(kI * kPi * s * x);
    case KernelKind::Laplace:
      return x * std::exp(-s * x);
    case KernelKind::CauchySquared: {
      const Complex d = s - x;
      return 1.0 / (1.0 + 4.0 * d * d);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown kernel kind");
}

CollocationNodes uniform_circle_nodes(int n_a) {
  if (n_a < 1) throw Error(ErrorCode::InvalidArgument, "uniform_circle_nodes: n_a must be >= 1");
  CollocationNodes out{CVector(n_a)};
  for (int t = 0; t < n_a; ++t) out.nodes[t] = std::polar(1.0, 2.0 * kPi * t / n_a);
  return out;
}

CollocationNodes chebyshev_nodes(int n_a, double lo, double hi, ChebyshevKind kind) {
  if (n_a < 1) throw Error(ErrorCode::InvalidArgument, "chebyshev_nodes: n_a must be >= 1");
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "chebyshev_nodes: need lo < hi");
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  CollocationNodes out{CVector(n_a)};
  for (int t = 0; t < n_a; ++t) {
    double c = 0.0;
    if (kind == ChebyshevKind::First) {
      c = std::cos((2.0 * (t + 1) - 1.0) * kPi / (2.0 * n_a));
    } else if (n_a > 1) {
      c = std::cos(kPi * t / (n_a - 1));
    }
    out.nodes[t] = mid + half * c;
  }
  return out;
}

int default_sample_count(PresetId preset) {
  switch (preset) {
    case PresetId::Rational: return 40;
    case PresetId::Spectral: return 256;
    case PresetId::Fourier: return 128;
    case PresetId::Laplace: return 100;
    case PresetId::Deconvolution: return 128;
  }
  return 0;
}

SampleSet generate_samples(PresetId preset, std::uint64_t rng_seed, double beta, int n_s) {
  if (n_s == 0) n_s = default_sample_count(preset);
  if (n_s < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  Rng rng(rng_seed, Rng::Stream::Samples);
  SampleSet out;
  switch (preset) {
    case PresetId::Rational: {
      out.points.resize(n_s);
      for (Eigen::Index j = 0; j < out.points.size(); ++j) {
        const double r = rng.uniform(1.2, 2.2);
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        out.points[j] = std::polar(r, theta);
      }
      break;
    }
    case PresetId::Spectral: {
      if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "Matsubara beta must be positive");
      if (n_s % 2 != 0) throw Error(ErrorCode::InvalidArgument, "Matsubara grid needs an even sample count");
      const int half = n_s / 2;
      out.points.resize(n_s);
      for (int j = 1; j <= half; ++j) {
        const double w = (2.0 * j - 1.0) * kPi / beta;
        out.points[j - 1] = Complex(0.0, w);
        out.points[half + j - 1] = Complex(0.0, -w);
      }
      break;
    }
    case PresetId::Fourier:
    case PresetId::Deconvolution:
      out.points.resize(n_s);
      for (Eigen::Index j = 0; j < out.points.size(); ++j) out.points[j] = rng.uniform(-5.0, 5.0);
      break;
    case PresetId::Laplace:
      out.points.resize(n_s);
      for (Eigen::Index j = 0; j < out.points.size(); ++j) out.points[j] = rng.uniform(0.0, 10.0);
      break;
  }
  return out;
}

CMatrix kernel_matrix(const KernelDescriptor& kernel, const CVector& samples, const CVector& points) {
  CMatrix K(samples.size(), points.size());
  for (Eigen::Index k = 0; k < points.size(); ++k)
    for (Eigen::Index j = 0; j < samples.size(); ++j) K(j, k) = eval_kernel(kernel, samples[j], points[k]);
  return K;
}

CVector synthesize(const KernelDescriptor& kernel, const SpikeSignal& signal, const SampleSet& samples) {
  if (signal.locations.size() != signal.weights.size())
    throw Error(ErrorCode::SizeMismatch, "spike locations and weights differ in length");
  CVector u = CVector::Zero(samples.points.size());
  for (Eigen::Index j = 0; j < samples.points.size(); ++j)
    for (Eigen::Index k = 0; k < signal.locations.size(); ++k)
      u[j] += signal.weights[k] * eval_kernel(kernel, samples.points[j], signal.locations[k]);
  return u;
}

Observations add_noise(const CVector& exact, double sigma, std::uint64_t rng_seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise level must be nonnegative");
  Observations obs{exact, exact, sigma, rng_seed};
  if (sigma == 0.0) return obs;
  Rng rng(rng_seed, Rng::Stream::Noise);
  for (Eigen::Index j = 0; j < exact.size(); ++j) obs.noisy[j] = exact[j] * (1.0 + sigma * rng.normal());
  return obs;
}

CollocationSystem build_collocation_system(const KernelDescriptor& kernel, const SampleSet& samples,
                                           const CollocationNodes& nodes) {
  CollocationSystem sys;
  sys.G = kernel_matrix(kernel, samples.points, nodes.nodes);
  sys.nodes = nodes.nodes;
  sys.column_norms = sys.G.colwise().norm().transpose();
  sys.G_hat = sys.G;
  for (Eigen::Index t = 0; t < sys.G.cols(); ++t) {
    if (sys.column_norms[t] == 0.0) {
      std::ostringstream msg;
      msg << "collocation column " << t << " (node " << nodes.nodes[t] << ") is identically zero";
      throw Error(ErrorCode::DegenerateColumn, msg.str());
    }
    sys.G_hat.col(t) /= sys.column_norms[t];
  }
  return sys;
}

}  // namespace emx
