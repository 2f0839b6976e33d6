#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "emx/eigenmatrix.hpp"
#include "emx/metrics.hpp"

namespace emx {

enum class SampleLaw { RandomAnnulus, Matsubara, UniformInterval };
enum class NodeLaw { UnitCircle, ChebyshevFirstKind, ChebyshevSecondKind };

/// One of the five benchmark problems with all of its constants.
struct ExperimentPreset {
  PresetId id = PresetId::Rational;
  KernelDescriptor kernel;
  SpikeSignal truth;
  int n_s = 0;
  int n_a = 32;
  SampleLaw sample_law = SampleLaw::RandomAnnulus;
  NodeLaw node_law = NodeLaw::UnitCircle;
  std::vector<double> sigma_list;
  /// Matsubara inverse temperature; only the spectral preset reads it.
  double beta = kDefaultMatsubaraBeta;
  /// Seed of the sample-set stream. Fixed per preset so every noise seed
  /// sees the same sampling locations.
  std::uint64_t sample_seed = 1;

  // Method defaults applied by make_method().
  int l = 0;
  double tol_factor = kDefaultTolFactor;
  double gamma = 1e-3;
  int lcurve_grid = kDefaultLCurveGridSize;

  SampleSet samples() const;
  CollocationNodes nodes() const;
  MethodConfig make_method(MethodVariant variant) const;
};

ExperimentPreset load_preset(PresetId id);
ExperimentPreset load_preset(std::string_view name);

/// Applies overrides from a JSON object. Top-level keys apply to every
/// preset; a key naming a preset ("laplace": {...}) applies only to it.
/// Recognized keys: n_s, n_a, beta, sigma_list, l, tol_factor, gamma,
/// lcurve_grid, sample_seed, chebyshev_kind ("first"|"second"),
/// truth {locations, weights}. Unknown keys raise ConfigError.
void apply_config(ExperimentPreset& preset, const std::string& json_text);
void apply_config_file(ExperimentPreset& preset, const std::filesystem::path& path);

struct RunRecord {
  PresetId preset = PresetId::Rational;
  MethodVariant method = MethodVariant::RegularizedLCurve;
  /// tol_factor for pinv, gamma for fixed-gamma, 0 for lcurve.
  double method_parameter = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  ErrorPair errors;
  double gamma_or_tol = 0.0;
  double wall_time_ms = 0.0;

  bool ok = true;
  std::string failed_stage;
  std::string failure;

  double cond_v_minus = 0.0;
  double svd_gap = 0.0;
  std::int64_t rank_g_hat = 0;
  std::int64_t rank_krylov = 0;
  bool flat_curve = false;
  bool ill_conditioned_shift = false;
  CVector raw_locations;
  CVector locations;
  CVector weights;

  bool operator==(const RunRecord&) const;
};

struct SweepOptions {
  /// Worker threads; 0 uses the hardware concurrency.
  int threads = 0;
};

/// One record per (sigma, seed, method), ordered by sigma_list, then seeds,
/// then methods, independent of scheduling. The noise draw for a seed is
/// shared by every sigma and method.
std::vector<RunRecord> run_sweep(const ExperimentPreset& preset, const std::vector<MethodConfig>& methods,
                                 const std::vector<std::uint64_t>& seeds, const SweepOptions& options = {});

struct SummaryRow {
  PresetId preset;
  MethodVariant method;
  double method_parameter;
  double sigma;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::size_t flat_curves = 0;
  double median_location_error = 0.0;
  double iqr_location_error = 0.0;
  double median_weight_error = 0.0;
  double iqr_weight_error = 0.0;
};

/// Median and interquartile range per (preset, sigma, method), over the
/// successful runs, in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

enum class ReportFormat { Csv, Json, PlotData };
ReportFormat parse_format(std::string_view name);

struct ReportOptions {
  /// wall_time_ms is written as 0 unless set, keeping reports byte-reproducible.
  bool include_timing = false;
};

/// Writes records.csv, records.json, or a plotdata/ directory under out_dir.
/// Returns the paths written.
std::vector<std::filesystem::path> emit_report(const std::vector<RunRecord>& records, ReportFormat format,
                                               const std::filesystem::path& out_dir,
                                               const ReportOptions& options = {});

inline constexpr const char* kCsvHeader =
    "preset,method,sigma,seed,location_error,weight_error,gamma_or_tol,condV_minus,svd_gap,wall_time_ms";

std::string to_csv_row(const RunRecord& record, const ReportOptions& options = {});
std::string to_json(const std::vector<RunRecord>& records, const ReportOptions& options = {});
std::vector<RunRecord> records_from_json(const std::string& text);

/// "re+imi" with round-trip precision, e.g. "0.5-2i".
std::string format_complex(Complex z);
Complex parse_complex(std::string_view text);

}  // namespace emx
