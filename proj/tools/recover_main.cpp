// recover: run the eigenmatrix benchmark sweeps from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 at least one run failed in some
// pipeline stage (see the JSON report for the stage and message).

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emx/emx.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRunFailure = 2;

struct SweepHandle {
  emx_sweep* ptr = nullptr;
  ~SweepHandle() { emx_sweep_destroy(ptr); }
};

struct ResultsHandle {
  emx_results* ptr = nullptr;
  ~ResultsHandle() { emx_results_destroy(ptr); }
};

bool check(emx_status st, const char* what) {
  if (st == EMX_OK) return true;
  std::fprintf(stderr, "recover: %s: %s (%s)\n", what, emx_last_error(), emx_status_string(st));
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse spike recovery with the original and Tikhonov-regularized eigenmatrix methods"};
  app.set_version_flag("--version", std::string(emx_version()));

  std::string preset;
  std::vector<std::string> methods;
  std::vector<double> sigmas;
  int seed_count = 20;
  std::vector<std::uint64_t> seed_list;
  bool single_seed = false;
  int l = 0;
  double tol_factor = 0.0, gamma = 0.0, beta = 0.0;
  std::uint64_t sample_seed = 0;
  int grid = 0, threads = 0;
  std::string out_dir = ".";
  std::vector<std::string> formats;
  std::string config;
  bool timing = false, quiet = false;

  app.add_option("--preset", preset, "Benchmark problem")
      ->required()
      ->check(CLI::IsMember({"rational", "spectral", "fourier", "laplace", "deconv"}));
  app.add_option("--method", methods, "Recovery method (repeatable; default lcurve)")
      ->check(CLI::IsMember({"pinv", "lcurve", "fixed-gamma"}));
  app.add_option("--sigma", sigmas, "Noise level (repeatable; default: the preset's list)")
      ->check(CLI::NonNegativeNumber);
  auto* seeds_opt = app.add_option("--seeds", seed_count, "Use seeds 0..N-1 (default 20)")->check(CLI::PositiveNumber);
  auto* list_opt = app.add_option("--seed-list", seed_list, "Explicit noise seeds");
  auto* single_opt = app.add_flag("--single-seed", single_seed, "One noise draw (seed 0), like a single figure");
  seeds_opt->excludes(list_opt)->excludes(single_opt);
  list_opt->excludes(single_opt);
  auto* l_opt = app.add_option("--l", l, "Highest Krylov power (default 2 n_x + 2)")->check(CLI::PositiveNumber);
  auto* tol_opt = app.add_option("--tol-factor", tol_factor, "pinv threshold as a multiple of ||G_hat||_F")
                      ->check(CLI::PositiveNumber);
  auto* gamma_opt = app.add_option("--gamma", gamma, "Tikhonov parameter for fixed-gamma")->check(CLI::PositiveNumber);
  auto* beta_opt = app.add_option("--beta", beta, "Matsubara beta for the spectral preset")->check(CLI::PositiveNumber);
  auto* sseed_opt = app.add_option("--sample-seed", sample_seed, "Seed of the sampling-location stream");
  auto* grid_opt = app.add_option("--grid-size", grid, "L-curve grid size")->check(CLI::Range(16, 100000));
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", formats, "Report format (repeatable; default csv)")
      ->check(CLI::IsMember({"csv", "json", "plotdata"}));
  app.add_option("--config", config, "JSON file overriding preset fields")->check(CLI::ExistingFile);
  app.add_flag("--timing", timing, "Record wall-clock times in reports (breaks byte reproducibility)");
  app.add_flag("--quiet", quiet, "Suppress the summary table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  SweepHandle sweep;
  if (!check(emx_sweep_create(preset.c_str(), &sweep.ptr), "preset")) return kExitUsage;
  if (!config.empty() && !check(emx_sweep_load_config(sweep.ptr, config.c_str()), "config")) return kExitUsage;

  bool ok = true;
  if (!sigmas.empty()) ok &= check(emx_sweep_set_sigmas(sweep.ptr, sigmas.data(), sigmas.size()), "--sigma");
  if (single_seed) seed_list = {0};
  if (seed_list.empty())
    for (int k = 0; k < seed_count; ++k) seed_list.push_back(static_cast<std::uint64_t>(k));
  ok &= check(emx_sweep_set_seeds(sweep.ptr, seed_list.data(), seed_list.size()), "seeds");
  if (*l_opt) ok &= check(emx_sweep_set_krylov_order(sweep.ptr, l), "--l");
  if (*tol_opt) ok &= check(emx_sweep_set_tol_factor(sweep.ptr, tol_factor), "--tol-factor");
  if (*gamma_opt) ok &= check(emx_sweep_set_gamma(sweep.ptr, gamma), "--gamma");
  if (*beta_opt) ok &= check(emx_sweep_set_beta(sweep.ptr, beta), "--beta");
  if (*sseed_opt) ok &= check(emx_sweep_set_sample_seed(sweep.ptr, sample_seed), "--sample-seed");
  if (*grid_opt) ok &= check(emx_sweep_set_lcurve_grid(sweep.ptr, grid), "--grid-size");
  ok &= check(emx_sweep_set_threads(sweep.ptr, threads), "--threads");
  if (methods.empty()) methods = {"lcurve"};
  for (const auto& m : methods) {
    const emx_method id = m == "pinv" ? EMX_METHOD_PINV : m == "fixed-gamma" ? EMX_METHOD_FIXED_GAMMA : EMX_METHOD_LCURVE;
    ok &= check(emx_sweep_add_method(sweep.ptr, id), "--method");
  }
  if (!ok) return kExitUsage;

  ResultsHandle results;
  if (!check(emx_sweep_run(sweep.ptr, &results.ptr), "sweep")) return kExitRunFailure;

  if (formats.empty()) formats = {"csv"};
  for (const auto& f : formats) {
    const emx_format fmt = f == "json" ? EMX_FORMAT_JSON : f == "plotdata" ? EMX_FORMAT_PLOTDATA : EMX_FORMAT_CSV;
    if (!check(emx_results_write(results.ptr, out_dir.c_str(), fmt, timing ? 1 : 0), "write")) return kExitUsage;
  }

  if (!quiet) {
    std::printf("%-9s %-12s %-10s %5s %5s %5s %14s %12s %14s %12s\n", "preset", "method", "sigma", "runs", "fail",
                "flat", "median_loc_err", "iqr_loc", "median_w_err", "iqr_w");
    const size_t n = emx_results_summary_count(results.ptr);
    for (size_t i = 0; i < n; ++i) {
      emx_summary s{};
      emx_results_summary_get(results.ptr, i, &s);
      std::printf("%-9s %-12s %-10.3g %5zu %5zu %5zu %14.6g %12.4g %14.6g %12.4g\n", s.preset, s.method, s.sigma,
                  s.runs, s.failures, s.flat_curves, s.median_location_error, s.iqr_location_error,
                  s.median_weight_error, s.iqr_weight_error);
    }
  }

  const size_t failures = emx_results_failures(results.ptr);
  if (failures > 0) {
    std::fprintf(stderr, "recover: %zu run(s) failed; see the JSON report for stage details\n", failures);
    return kExitRunFailure;
  }
  return 0;
}
