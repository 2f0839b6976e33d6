#include <memory>
#include <new>
#include <string>

#include "emx/emx.h"
#include "emx/experiments.hpp"

struct emx_sweep {
  emx::ExperimentPreset preset;
  std::vector<emx::MethodConfig> methods;
  std::vector<std::uint64_t> seeds;
  emx::SweepOptions options;
};

struct emx_results {
  std::vector<emx::RunRecord> records;
  std::vector<emx::SummaryRow> summary;
};

namespace {

thread_local std::string g_last_error;

emx_status to_status(emx::ErrorCode code) {
  using emx::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return EMX_ERR_INVALID_ARGUMENT;
    case ErrorCode::UnknownPreset: return EMX_ERR_UNKNOWN_PRESET;
    case ErrorCode::DomainError: return EMX_ERR_DOMAIN;
    case ErrorCode::DegenerateColumn: return EMX_ERR_DEGENERATE_COLUMN;
    case ErrorCode::AllTruncated: return EMX_ERR_ALL_TRUNCATED;
    case ErrorCode::ConvergenceFailure: return EMX_ERR_CONVERGENCE;
    case ErrorCode::RankDeficient: return EMX_ERR_RANK_DEFICIENT;
    case ErrorCode::DegenerateDesign: return EMX_ERR_DEGENERATE_DESIGN;
    case ErrorCode::SizeMismatch: return EMX_ERR_SIZE_MISMATCH;
    case ErrorCode::IoError: return EMX_ERR_IO;
    case ErrorCode::ConfigError: return EMX_ERR_CONFIG;
  }
  return EMX_ERR_INTERNAL;
}

emx_status fail(emx_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class Fn>
emx_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EMX_OK;
  } catch (const emx::Error& e) {
    return fail(to_status(e.code()), e.stage().empty() ? e.what() : e.stage() + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(EMX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EMX_ERR_INTERNAL, e.what());
  }
}

#define EMX_REQUIRE(cond, msg) \
  if (!(cond)) return fail(EMX_ERR_INVALID_ARGUMENT, msg)

emx::CVector complex_view(const double* data, size_t n) {
  emx::CVector v(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = {data[2 * i], data[2 * i + 1]};
  return v;
}

emx::KernelKind kernel_kind(emx_kernel k) {
  switch (k) {
    case EMX_KERNEL_RATIONAL: return emx::KernelKind::Rational;
    case EMX_KERNEL_SPECTRAL_RATIONAL: return emx::KernelKind::SpectralRational;
    case EMX_KERNEL_FOURIER: return emx::KernelKind::Fourier;
    case EMX_KERNEL_LAPLACE: return emx::KernelKind::Laplace;
    case EMX_KERNEL_CAUCHY_SQUARED: return emx::KernelKind::CauchySquared;
  }
  throw emx::Error(emx::ErrorCode::InvalidArgument, "unknown kernel id");
}

emx::MethodVariant method_variant(emx_method m) {
  switch (m) {
    case EMX_METHOD_PINV: return emx::MethodVariant::OriginalPinv;
    case EMX_METHOD_LCURVE: return emx::MethodVariant::RegularizedLCurve;
    case EMX_METHOD_FIXED_GAMMA: return emx::MethodVariant::RegularizedFixedGamma;
  }
  throw emx::Error(emx::ErrorCode::InvalidArgument, "unknown method id");
}

}  // namespace

extern "C" {

const char* emx_version(void) { return "1.0.0"; }

const char* emx_status_string(emx_status status) {
  switch (status) {
    case EMX_OK: return "ok";
    case EMX_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EMX_ERR_UNKNOWN_PRESET: return "unknown preset";
    case EMX_ERR_DOMAIN: return "kernel domain error";
    case EMX_ERR_DEGENERATE_COLUMN: return "degenerate collocation column";
    case EMX_ERR_ALL_TRUNCATED: return "all singular values truncated";
    case EMX_ERR_CONVERGENCE: return "decomposition failed to converge";
    case EMX_ERR_RANK_DEFICIENT: return "Krylov matrix rank deficient";
    case EMX_ERR_DEGENERATE_DESIGN: return "degenerate weight design";
    case EMX_ERR_SIZE_MISMATCH: return "size mismatch";
    case EMX_ERR_IO: return "I/O error";
    case EMX_ERR_CONFIG: return "configuration error";
    case EMX_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* emx_last_error(void) { return g_last_error.c_str(); }

emx_status emx_sweep_create(const char* preset, emx_sweep** out) {
  EMX_REQUIRE(preset && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<emx_sweep>();
    s->preset = emx::load_preset(preset);
    for (std::uint64_t k = 0; k < 20; ++k) s->seeds.push_back(k);
    *out = s.release();
  });
}

void emx_sweep_destroy(emx_sweep* sweep) { delete sweep; }

emx_status emx_sweep_load_config(emx_sweep* sweep, const char* path) {
  EMX_REQUIRE(sweep && path, "null argument");
  return guarded([&] { emx::apply_config_file(sweep->preset, path); });
}

emx_status emx_sweep_set_sigmas(emx_sweep* sweep, const double* sigmas, size_t count) {
  EMX_REQUIRE(sweep && sigmas && count > 0, "need a nonempty sigma list");
  for (size_t i = 0; i < count; ++i) EMX_REQUIRE(sigmas[i] >= 0.0, "sigma must be nonnegative");
  sweep->preset.sigma_list.assign(sigmas, sigmas + count);
  return EMX_OK;
}

emx_status emx_sweep_get_sigmas(const emx_sweep* sweep, double* sigmas, size_t capacity, size_t* count) {
  EMX_REQUIRE(sweep && count, "null argument");
  const auto& list = sweep->preset.sigma_list;
  *count = list.size();
  for (size_t i = 0; i < list.size() && i < capacity && sigmas; ++i) sigmas[i] = list[i];
  return EMX_OK;
}

emx_status emx_sweep_set_seeds(emx_sweep* sweep, const uint64_t* seeds, size_t count) {
  EMX_REQUIRE(sweep && seeds && count > 0, "need a nonempty seed list");
  sweep->seeds.assign(seeds, seeds + count);
  return EMX_OK;
}

emx_status emx_sweep_set_krylov_order(emx_sweep* sweep, int l) {
  EMX_REQUIRE(sweep && l > sweep->preset.truth.size(), "l must exceed the spike count");
  sweep->preset.l = l;
  return EMX_OK;
}

emx_status emx_sweep_set_tol_factor(emx_sweep* sweep, double tol_factor) {
  EMX_REQUIRE(sweep && tol_factor > 0.0, "tol_factor must be positive");
  sweep->preset.tol_factor = tol_factor;
  return EMX_OK;
}

emx_status emx_sweep_set_gamma(emx_sweep* sweep, double gamma) {
  EMX_REQUIRE(sweep && gamma > 0.0, "gamma must be positive");
  sweep->preset.gamma = gamma;
  return EMX_OK;
}

emx_status emx_sweep_set_beta(emx_sweep* sweep, double beta) {
  EMX_REQUIRE(sweep && beta > 0.0, "beta must be positive");
  sweep->preset.beta = beta;
  return EMX_OK;
}

emx_status emx_sweep_set_sample_seed(emx_sweep* sweep, uint64_t seed) {
  EMX_REQUIRE(sweep, "null argument");
  sweep->preset.sample_seed = seed;
  return EMX_OK;
}

emx_status emx_sweep_set_lcurve_grid(emx_sweep* sweep, int grid_size) {
  EMX_REQUIRE(sweep && grid_size >= 16, "L-curve grid size must be at least 16");
  sweep->preset.lcurve_grid = grid_size;
  return EMX_OK;
}

emx_status emx_sweep_set_threads(emx_sweep* sweep, int threads) {
  EMX_REQUIRE(sweep && threads >= 0, "threads must be nonnegative");
  sweep->options.threads = threads;
  return EMX_OK;
}

emx_status emx_sweep_add_method(emx_sweep* sweep, emx_method method) {
  EMX_REQUIRE(sweep, "null argument");
  return guarded([&] {
    auto m = sweep->preset.make_method(method_variant(method));
    m.validate();
    sweep->methods.push_back(std::move(m));
  });
}

emx_status emx_sweep_run(const emx_sweep* sweep, emx_results** out) {
  EMX_REQUIRE(sweep && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto methods = sweep->methods;
    if (methods.empty()) methods.push_back(sweep->preset.make_method(emx::MethodVariant::RegularizedLCurve));
    auto r = std::make_unique<emx_results>();
    r->records = emx::run_sweep(sweep->preset, methods, sweep->seeds, sweep->options);
    r->summary = emx::summarize(r->records);
    *out = r.release();
  });
}

void emx_results_destroy(emx_results* results) { delete results; }

size_t emx_results_count(const emx_results* results) { return results ? results->records.size() : 0; }

size_t emx_results_failures(const emx_results* results) {
  if (!results) return 0;
  size_t n = 0;
  for (const auto& r : results->records) n += r.ok ? 0 : 1;
  return n;
}

emx_status emx_results_get(const emx_results* results, size_t index, emx_record* out) {
  EMX_REQUIRE(results && out, "null argument");
  EMX_REQUIRE(index < results->records.size(), "record index out of range");
  const auto& r = results->records[index];
  out->preset = emx::to_string(r.preset).data();
  out->method = emx::to_string(r.method).data();
  out->method_parameter = r.method_parameter;
  out->sigma = r.sigma;
  out->seed = r.seed;
  out->location_error = r.errors.location_error;
  out->weight_error = r.errors.weight_error;
  out->gamma_or_tol = r.gamma_or_tol;
  out->cond_v_minus = r.cond_v_minus;
  out->svd_gap = r.svd_gap;
  out->wall_time_ms = r.wall_time_ms;
  out->ok = r.ok ? 1 : 0;
  out->flat_curve = r.flat_curve ? 1 : 0;
  out->ill_conditioned_shift = r.ill_conditioned_shift ? 1 : 0;
  out->failed_stage = r.failed_stage.c_str();
  out->failure = r.failure.c_str();
  return EMX_OK;
}

size_t emx_results_summary_count(const emx_results* results) { return results ? results->summary.size() : 0; }

emx_status emx_results_summary_get(const emx_results* results, size_t index, emx_summary* out) {
  EMX_REQUIRE(results && out, "null argument");
  EMX_REQUIRE(index < results->summary.size(), "summary index out of range");
  const auto& s = results->summary[index];
  out->preset = emx::to_string(s.preset).data();
  out->method = emx::to_string(s.method).data();
  out->method_parameter = s.method_parameter;
  out->sigma = s.sigma;
  out->runs = s.runs;
  out->failures = s.failures;
  out->flat_curves = s.flat_curves;
  out->median_location_error = s.median_location_error;
  out->iqr_location_error = s.iqr_location_error;
  out->median_weight_error = s.median_weight_error;
  out->iqr_weight_error = s.iqr_weight_error;
  return EMX_OK;
}

emx_status emx_results_write(const emx_results* results, const char* dir, emx_format format, int include_timing) {
  EMX_REQUIRE(results && dir, "null argument");
  return guarded([&] {
    emx::ReportFormat f = emx::ReportFormat::Csv;
    switch (format) {
      case EMX_FORMAT_CSV: f = emx::ReportFormat::Csv; break;
      case EMX_FORMAT_JSON: f = emx::ReportFormat::Json; break;
      case EMX_FORMAT_PLOTDATA: f = emx::ReportFormat::PlotData; break;
      default: throw emx::Error(emx::ErrorCode::InvalidArgument, "unknown report format");
    }
    emx::emit_report(results->records, f, dir, {include_timing != 0});
  });
}

emx_status emx_kernel_eval(emx_kernel kernel, const double s[2], const double x[2], double out[2]) {
  EMX_REQUIRE(s && x && out, "null argument");
  return guarded([&] {
    const emx::KernelDescriptor k{kernel_kind(kernel), emx::Domain::unit_disk()};
    const auto g = emx::eval_kernel(k, {s[0], s[1]}, {x[0], x[1]});
    out[0] = g.real();
    out[1] = g.imag();
  });
}

emx_status emx_recover(emx_kernel kernel, double domain_lo, double domain_hi, const double* samples, size_t n_s,
                       const double* nodes, size_t n_a, const double* observations, emx_method method,
                       double parameter, int l, int n_x, double* locations, double* weights, double* gamma_or_tol) {
  EMX_REQUIRE(samples && nodes && observations && locations && weights, "null argument");
  EMX_REQUIRE(n_s > 0 && n_a > 0 && n_x > 0, "sizes must be positive");
  return guarded([&] {
    emx::KernelDescriptor k{kernel_kind(kernel), domain_lo < domain_hi ? emx::Domain::interval(domain_lo, domain_hi)
                                                                       : emx::Domain::unit_disk()};
    emx::MethodConfig cfg;
    cfg.variant = method_variant(method);
    if (cfg.variant == emx::MethodVariant::OriginalPinv) cfg.tol_factor = parameter;
    if (cfg.variant == emx::MethodVariant::RegularizedFixedGamma) cfg.gamma = parameter;
    cfg.l = l > 0 ? l : 0;
    cfg.n_x = n_x;
    emx::Observations obs;
    obs.noisy = complex_view(observations, n_s);
    obs.exact = obs.noisy;
    const auto res = emx::recover(cfg, k, emx::SampleSet{complex_view(samples, n_s)},
                                  emx::CollocationNodes{complex_view(nodes, n_a)}, obs);
    for (int i = 0; i < n_x; ++i) {
      locations[2 * i] = res.locations[i].real();
      locations[2 * i + 1] = res.locations[i].imag();
      weights[2 * i] = res.weights[i].real();
      weights[2 * i + 1] = res.weights[i].imag();
    }
    if (gamma_or_tol) *gamma_or_tol = res.gamma_or_tol;
  });
}

}  // extern "C"
