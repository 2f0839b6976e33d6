#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "emx/emx.h"

extern "C" int emx_c_header_check(void);

namespace fs = std::filesystem;

namespace {

struct Sweep {
  emx_sweep* ptr = nullptr;
  ~Sweep() { emx_sweep_destroy(ptr); }
};

struct Results {
  emx_results* ptr = nullptr;
  ~Results() { emx_results_destroy(ptr); }
};

std::vector<double> interleave(const std::vector<std::complex<double>>& z) {
  std::vector<double> out;
  for (auto v : z) {
    out.push_back(v.real());
    out.push_back(v.imag());
  }
  return out;
}

}  // namespace

TEST_CASE("header compiles as C") { CHECK(emx_c_header_check() == 1); }

TEST_CASE("status strings and version") {
  CHECK(std::string(emx_version()).size() > 0);
  CHECK(std::string(emx_status_string(EMX_OK)) == "ok");
  CHECK(std::string(emx_status_string(EMX_ERR_RANK_DEFICIENT)).size() > 0);
  CHECK(std::string(emx_status_string(static_cast<emx_status>(999))).size() > 0);
}

TEST_CASE("sweep creation and argument checks") {
  emx_sweep* bad = nullptr;
  CHECK(emx_sweep_create("heat", &bad) == EMX_ERR_UNKNOWN_PRESET);
  CHECK(bad == nullptr);
  CHECK(std::string(emx_last_error()).find("heat") != std::string::npos);
  CHECK(emx_sweep_create("laplace", nullptr) == EMX_ERR_INVALID_ARGUMENT);

  Sweep s;
  REQUIRE(emx_sweep_create("laplace", &s.ptr) == EMX_OK);
  double sig[4];
  size_t n = 0;
  REQUIRE(emx_sweep_get_sigmas(s.ptr, sig, 4, &n) == EMX_OK);
  REQUIRE(n == 3);
  CHECK(sig[0] == 5e-2);
  CHECK(sig[2] == 5e-4);
  const double neg = -1.0;
  CHECK(emx_sweep_set_sigmas(s.ptr, &neg, 1) == EMX_ERR_INVALID_ARGUMENT);
  CHECK(emx_sweep_set_sigmas(s.ptr, nullptr, 0) == EMX_ERR_INVALID_ARGUMENT);
  CHECK(emx_sweep_set_tol_factor(s.ptr, 0.0) == EMX_ERR_INVALID_ARGUMENT);
  CHECK(emx_sweep_set_gamma(s.ptr, -1.0) == EMX_ERR_INVALID_ARGUMENT);
  CHECK(emx_sweep_set_lcurve_grid(s.ptr, 4) == EMX_ERR_INVALID_ARGUMENT);
  CHECK(emx_sweep_set_krylov_order(s.ptr, 4) == EMX_ERR_INVALID_ARGUMENT);
  CHECK(emx_sweep_add_method(s.ptr, static_cast<emx_method>(7)) == EMX_ERR_INVALID_ARGUMENT);
  CHECK(emx_sweep_load_config(s.ptr, "/nonexistent/cfg.json") != EMX_OK);
  CHECK(emx_sweep_set_sigmas(nullptr, sig, 1) == EMX_ERR_INVALID_ARGUMENT);
}

TEST_CASE("sweep run, records, summaries and reports") {
  Sweep s;
  REQUIRE(emx_sweep_create("fourier", &s.ptr) == EMX_OK);
  const double sig[] = {1e-1, 1e-2};
  const uint64_t seeds[] = {3, 4, 5};
  REQUIRE(emx_sweep_set_sigmas(s.ptr, sig, 2) == EMX_OK);
  REQUIRE(emx_sweep_set_seeds(s.ptr, seeds, 3) == EMX_OK);
  REQUIRE(emx_sweep_set_tol_factor(s.ptr, 1e-8) == EMX_OK);
  REQUIRE(emx_sweep_add_method(s.ptr, EMX_METHOD_PINV) == EMX_OK);
  REQUIRE(emx_sweep_set_tol_factor(s.ptr, 1e-4) == EMX_OK);
  REQUIRE(emx_sweep_add_method(s.ptr, EMX_METHOD_PINV) == EMX_OK);
  REQUIRE(emx_sweep_add_method(s.ptr, EMX_METHOD_LCURVE) == EMX_OK);

  Results r;
  REQUIRE(emx_sweep_run(s.ptr, &r.ptr) == EMX_OK);
  REQUIRE(emx_results_count(r.ptr) == 18);
  CHECK(emx_results_failures(r.ptr) == 0);
  emx_record rec{};
  REQUIRE(emx_results_get(r.ptr, 0, &rec) == EMX_OK);
  CHECK(std::string(rec.preset) == "fourier");
  CHECK(std::string(rec.method) == "pinv");
  CHECK(rec.method_parameter == 1e-8);
  CHECK(rec.sigma == 1e-1);
  CHECK(rec.seed == 3);
  CHECK(rec.ok == 1);
  CHECK(std::isfinite(rec.location_error));
  REQUIRE(emx_results_get(r.ptr, 1, &rec) == EMX_OK);
  CHECK(rec.method_parameter == 1e-4);
  CHECK(emx_results_get(r.ptr, 18, &rec) == EMX_ERR_INVALID_ARGUMENT);

  REQUIRE(emx_results_summary_count(r.ptr) == 6);
  emx_summary sum{};
  REQUIRE(emx_results_summary_get(r.ptr, 2, &sum) == EMX_OK);
  CHECK(std::string(sum.method) == "lcurve");
  CHECK(sum.runs == 3);
  CHECK(sum.median_location_error > 0.0);

  const fs::path dir = fs::temp_directory_path() / "emx_capi_report";
  fs::remove_all(dir);
  REQUIRE(emx_results_write(r.ptr, dir.c_str(), EMX_FORMAT_CSV, 0) == EMX_OK);
  REQUIRE(emx_results_write(r.ptr, dir.c_str(), EMX_FORMAT_JSON, 0) == EMX_OK);
  REQUIRE(emx_results_write(r.ptr, dir.c_str(), EMX_FORMAT_PLOTDATA, 0) == EMX_OK);
  CHECK(fs::exists(dir / "records.csv"));
  CHECK(fs::exists(dir / "records.json"));
  CHECK(fs::is_directory(dir / "plotdata"));
  CHECK(emx_results_write(r.ptr, (dir / "records.csv" / "x").c_str(), EMX_FORMAT_CSV, 0) == EMX_ERR_IO);
}

TEST_CASE("kernel evaluation") {
  const double s[] = {2.0, 0.0}, x[] = {0.0, 0.0};
  double out[2];
  REQUIRE(emx_kernel_eval(EMX_KERNEL_RATIONAL, s, x, out) == EMX_OK);
  CHECK(out[0] == 0.5);
  CHECK(out[1] == 0.0);
  CHECK(emx_kernel_eval(EMX_KERNEL_RATIONAL, s, s, out) == EMX_ERR_DOMAIN);
  CHECK(emx_kernel_eval(EMX_KERNEL_LAPLACE, x, s, out) == EMX_OK);
  CHECK(out[0] == 2.0);
}

TEST_CASE("single recovery on caller data") {
  using C = std::complex<double>;
  const int n_s = 64, n_a = 32;
  std::vector<C> samples, nodes, obs;
  for (int j = 0; j < n_s; ++j) samples.push_back(-5.0 + 10.0 * (j + 0.5) / n_s);
  for (int t = 1; t <= n_a; ++t) nodes.push_back(std::cos((2.0 * t - 1.0) * std::numbers::pi / (2.0 * n_a)));
  const double truth[] = {-0.6, 0.1, 0.7};
  for (C s : samples) {
    C u = 0;
    for (double x : truth) u += std::exp(C(0, std::numbers::pi) * s * x);
    obs.push_back(u);
  }
  const auto si = interleave(samples), ni = interleave(nodes), oi = interleave(obs);
  for (emx_method m : {EMX_METHOD_PINV, EMX_METHOD_LCURVE, EMX_METHOD_FIXED_GAMMA}) {
    double loc[6], w[6], g = 0;
    const double param = m == EMX_METHOD_PINV ? 1e-8 : 1e-6;
    // Exact data leaves the L-curve without a sharp corner.
    const double tol = m == EMX_METHOD_LCURVE ? 5e-2 : 1e-3;
    REQUIRE(emx_recover(EMX_KERNEL_FOURIER, -1, 1, si.data(), n_s, ni.data(), n_a, oi.data(), m, param, 0, 3, loc,
                        w, &g) == EMX_OK);
    CAPTURE(m);
    CHECK(g > 0);
    std::vector<double> found{loc[0], loc[2], loc[4]};
    std::sort(found.begin(), found.end());
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(found[static_cast<size_t>(k)] - truth[k]) < tol);
      CHECK(loc[2 * k + 1] == 0.0);
      CHECK(std::abs(C(w[2 * k], w[2 * k + 1]) - 1.0) < 10 * tol);
    }
  }
  double loc[2], w[2];
  CHECK(emx_recover(EMX_KERNEL_FOURIER, -1, 1, si.data(), n_s, ni.data(), n_a, oi.data(), EMX_METHOD_PINV, 1e-8, 3,
                    3, loc, w, nullptr) == EMX_ERR_INVALID_ARGUMENT);
  CHECK(std::string(emx_last_error()).find("config") != std::string::npos);
  CHECK(emx_recover(EMX_KERNEL_FOURIER, -1, 1, nullptr, n_s, ni.data(), n_a, oi.data(), EMX_METHOD_PINV, 1e-8, 0, 3,
                    loc, w, nullptr) == EMX_ERR_INVALID_ARGUMENT);
}
