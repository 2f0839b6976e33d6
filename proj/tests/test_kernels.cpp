#include <cmath>
#include <numbers>

#include "doctest.h"
#include "emx/kernels.hpp"
#include "emx/regularization.hpp"
#include "emx/rng.hpp"
#include "support.hpp"

using namespace emx;
using std::numbers::pi;

namespace {
const KernelDescriptor kRational{KernelKind::Rational, Domain::unit_disk()};
const KernelDescriptor kFourier{KernelKind::Fourier, Domain::interval(-1, 1)};
const KernelDescriptor kLaplace{KernelKind::Laplace, Domain::interval(0.1, 2.1)};
const KernelDescriptor kCauchy{KernelKind::CauchySquared, Domain::interval(-1, 1)};
}  // namespace

TEST_CASE("rng streams are reproducible and independent") {
  Rng a(7, Rng::Stream::Noise), b(7, Rng::Stream::Noise), c(7, Rng::Stream::Samples), d(8, Rng::Stream::Noise);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs_stream |= x != c.normal();
    differs_seed |= x != d.normal();
  }
  CHECK(differs_stream);
  CHECK(differs_seed);
}

TEST_CASE("rng uniform and normal moments") {
  Rng rng(3, Rng::Stream::Test);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
  const double x = rng.uniform(-5, 5);
  CHECK(x >= -5);
  CHECK(x < 5);
}

TEST_CASE("kernel values") {
  CHECK(eval_kernel(kRational, 2.0, 0.0) == Complex(0.5));
  CHECK(eval_kernel(kFourier, 0.0, 0.5) == Complex(1.0));
  CHECK(eval_kernel(kLaplace, 0.0, 2.0) == Complex(2.0));
  CHECK(eval_kernel(kCauchy, 0.3, 0.3) == Complex(1.0));
  CHECK(std::abs(eval_kernel(kFourier, 1.0, 1.0) - Complex(-1.0)) < 1e-15);
  CHECK(std::abs(eval_kernel(kLaplace, 1.0, 2.0) - 2.0 * std::exp(-2.0)) < 1e-15);
  CHECK(std::abs(eval_kernel(kCauchy, 1.0, 0.5) - 0.5) < 1e-15);
  const KernelDescriptor spectral{KernelKind::SpectralRational, Domain::interval(-1, 1)};
  CHECK(eval_kernel(spectral, Complex(0, 1), 0.0) == Complex(0, -1));
}

TEST_CASE("pole kernels reject coincident arguments") {
  try {
    eval_kernel(kRational, 0.5, 0.5);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
  CHECK_NOTHROW(eval_kernel(kFourier, 0.5, 0.5));
}

TEST_CASE("unit circle nodes") {
  const auto four = uniform_circle_nodes(4).nodes;
  const Complex expected[] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (int t = 0; t < 4; ++t) CHECK(std::abs(four[t] - expected[t]) < 1e-15);
  CHECK(uniform_circle_nodes(1).nodes[0] == Complex(1.0));
  const auto n32 = uniform_circle_nodes(32).nodes;
  REQUIRE(n32.size() == 32);
  for (int t = 0; t < 32; ++t) {
    CHECK(std::abs(std::abs(n32[t]) - 1.0) < 1e-15);
    const double step = std::arg(n32[(t + 1) % 32] / n32[t]);
    CHECK(step == doctest::Approx(pi / 16).epsilon(1e-12));
  }
}

TEST_CASE("chebyshev nodes") {
  CHECK(std::abs(chebyshev_nodes(1, -1, 1).nodes[0]) < 1e-16);
  const auto two = chebyshev_nodes(2, -1, 1).nodes;
  CHECK(std::abs(two[0] - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(two[1] + std::sqrt(0.5)) < 1e-15);
  const auto shifted = chebyshev_nodes(32, 0.1, 2.1).nodes;
  REQUIRE(shifted.size() == 32);
  for (int t = 0; t < 32; ++t) {
    CHECK(shifted[t].imag() == 0.0);
    CHECK(shifted[t].real() > 0.1);
    CHECK(shifted[t].real() < 2.1);
    for (int u = 0; u < t; ++u) CHECK(shifted[t] != shifted[u]);
  }
  const auto second = chebyshev_nodes(5, -1, 1, ChebyshevKind::Second).nodes;
  CHECK(std::abs(second[0] - 1.0) < 1e-15);
  CHECK(std::abs(second[4] + 1.0) < 1e-15);
  CHECK(std::abs(second[2]) < 1e-15);
}

TEST_CASE("sample generators") {
  SUBCASE("annulus") {
    const auto s = generate_samples(PresetId::Rational, 11).points;
    REQUIRE(s.size() == 40);
    for (auto z : s) {
      CHECK(std::abs(z) >= 1.2);
      CHECK(std::abs(z) <= 2.2);
    }
  }
  SUBCASE("matsubara") {
    const double beta = 12.5;
    const auto s = generate_samples(PresetId::Spectral, 0, beta).points;
    REQUIRE(s.size() == 256);
    CHECK(std::abs(s[0] - Complex(0, pi / beta)) < 1e-15);
    CHECK(std::abs(s[128] - Complex(0, -pi / beta)) < 1e-15);
    CHECK(std::abs(s[127] - Complex(0, 255 * pi / beta)) < 1e-12);
    CHECK(generate_samples(PresetId::Spectral, 99, beta).points == s);
    CHECK_THROWS_AS(generate_samples(PresetId::Spectral, 0, beta, 7), Error);
  }
  SUBCASE("intervals and determinism") {
    const auto a = generate_samples(PresetId::Fourier, 42).points;
    CHECK(a == generate_samples(PresetId::Fourier, 42).points);
    CHECK(a != generate_samples(PresetId::Fourier, 43).points);
    REQUIRE(a.size() == 128);
    for (auto z : a) CHECK((z.imag() == 0 && z.real() >= -5 && z.real() < 5));
    const auto l = generate_samples(PresetId::Laplace, 42).points;
    REQUIRE(l.size() == 100);
    for (auto z : l) CHECK((z.imag() == 0 && z.real() >= 0 && z.real() < 10));
    CHECK(generate_samples(PresetId::Deconvolution, 5).points.size() == 128);
    CHECK(generate_samples(PresetId::Deconvolution, 5, 30, 12).points.size() == 12);
  }
}

TEST_CASE("preset names") {
  CHECK(parse_preset("deconv") == PresetId::Deconvolution);
  CHECK(parse_preset("deconvolution") == PresetId::Deconvolution);
  CHECK(parse_preset(to_string(PresetId::Laplace)) == PresetId::Laplace);
  try {
    parse_preset("heat");
    FAIL("expected UnknownPreset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownPreset);
  }
}

TEST_CASE("synthesis") {
  const SampleSet samples = generate_samples(PresetId::Rational, 4);
  const Complex x0 = std::polar(0.9, 1.0);
  SpikeSignal one{CVector::Constant(1, x0), CVector::Ones(1)};
  const CVector u1 = synthesize(kRational, one, samples);
  for (Eigen::Index j = 0; j < u1.size(); ++j) CHECK(u1[j] == eval_kernel(kRational, samples.points[j], x0));

  SpikeSignal zero{CVector::Constant(1, x0), CVector::Zero(1)};
  CHECK(synthesize(kRational, zero, samples).norm() == 0.0);

  SpikeSignal two{CVector(2), CVector(2)};
  two.locations << Complex(0.1, 0.2), Complex(-0.5, 0.3);
  two.weights << Complex(1.5, -0.5), Complex(0.25, 2.0);
  const CVector u2 = synthesize(kRational, two, samples);
  for (Eigen::Index j = 0; j < u2.size(); ++j) {
    Complex ref = 0;
    for (int k = 0; k < 2; ++k) ref += two.weights[k] / (samples.points[j] - two.locations[k]);
    CHECK(std::abs(u2[j] - ref) <= 1e-14 * std::abs(ref));
  }

  SpikeSignal doubled = two;
  doubled.weights *= 2.0;
  CHECK(test::rel_diff(synthesize(kRational, doubled, samples), 2.0 * u2) <= 1e-14);

  SpikeSignal bad{CVector::Constant(1, samples.points[0]), CVector::Ones(1)};
  CHECK_THROWS_AS(synthesize(kRational, bad, samples), Error);
}

TEST_CASE("multiplicative noise") {
  Rng rng(1, Rng::Stream::Test);
  const CVector u = test::random_vector(rng, 50);
  const Observations clean = add_noise(u, 0.0, 9);
  CHECK(clean.noisy == u);
  CHECK(clean.exact == u);
  const Observations a = add_noise(u, 0.1, 9);
  CHECK(a.noisy == add_noise(u, 0.1, 9).noisy);
  CHECK(a.sigma == 0.1);
  CHECK(a.seed == 9);
  const Observations b = add_noise(u, 0.01, 9);
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const Complex ra = (a.noisy[j] - u[j]) / u[j];
    const Complex rb = (b.noisy[j] - u[j]) / u[j];
    CHECK(std::abs(ra.imag()) < 1e-12);
    CHECK(std::abs(ra - 10.0 * rb) <= 1e-12 * std::abs(ra));
  }
  CHECK_THROWS_AS(add_noise(u, -1.0, 9), Error);
}

TEST_CASE("noise Monte Carlo statistics") {
  const CVector u = CVector::Constant(1, Complex(0.3, -0.7));
  const int n = 100000;
  double sum = 0, sum2 = 0;
  for (int r = 0; r < n; ++r) {
    const Complex ratio = add_noise(u, 0.1, static_cast<std::uint64_t>(r)).noisy[0] / u[0];
    sum += ratio.real();
    sum2 += (ratio.real() - 1.0) * (ratio.real() - 1.0);
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - (mean - 1.0) * (mean - 1.0));
  CHECK(std::abs(mean - 1.0) <= 0.002);
  CHECK(std::abs(sd - 0.1) <= 0.002);
}

TEST_CASE("collocation system") {
  const SampleSet samples = generate_samples(PresetId::Rational, 2);
  const CollocationNodes nodes = uniform_circle_nodes(32);
  const CollocationSystem sys = build_collocation_system(kRational, samples, nodes);
  REQUIRE(sys.G.rows() == 40);
  REQUIRE(sys.G.cols() == 32);
  for (int t = 0; t < 32; ++t) {
    CHECK(std::abs(sys.G_hat.col(t).norm() - 1.0) <= 1e-14);
    for (int j = 0; j < 40; ++j) {
      CHECK(sys.G(j, t) == eval_kernel(kRational, samples.points[j], nodes.nodes[t]));
      CHECK(std::abs(sys.G_hat(j, t) * sys.column_norms[t] - sys.G(j, t)) <= 1e-14 * std::abs(sys.G(j, t)));
    }
  }
  CHECK(sys.nodes == nodes.nodes);

  const CollocationSystem tiny = build_collocation_system(kFourier, SampleSet{CVector::Zero(1)},
                                                          CollocationNodes{CVector::Constant(1, 0.3)});
  CHECK(tiny.G(0, 0) == Complex(1.0));
  CHECK(tiny.G_hat(0, 0) == Complex(1.0));

  const KernelDescriptor laplace{KernelKind::Laplace, Domain::interval(0, 2)};
  try {
    build_collocation_system(laplace, samples, CollocationNodes{CVector::Zero(2)});
    FAIL("expected DegenerateColumn");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateColumn);
  }
}

TEST_CASE("laplace collocation rank") {
  const SampleSet samples = generate_samples(PresetId::Laplace, 1);
  const CollocationSystem sys = build_collocation_system(kLaplace, samples, chebyshev_nodes(32, 0.1, 2.1));
  const RVector s = singular_values(sys.G_hat);
  // Rank at the default tolerance of MATLAB's rank(): max(m, n) * eps * sigma_max.
  const double matlab_tol = 100 * std::numeric_limits<double>::epsilon();
  CHECK(numerical_rank(s, matlab_tol) == 17);
  CHECK(condition_number(s) >= 1e15);
}

TEST_CASE("laplace collocation rank at 1e-12" * doctest::test_suite("conflicts")) {
  const SampleSet samples = generate_samples(PresetId::Laplace, 1);
  const CollocationSystem sys = build_collocation_system(kLaplace, samples, chebyshev_nodes(32, 0.1, 2.1));
  CHECK(numerical_rank(singular_values(sys.G_hat), 1e-12) == 17);
}
