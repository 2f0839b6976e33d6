/* C interface to the eigenmatrix sparse-recovery library.
 *
 * All functions return an emx_status; on failure a description of the last
 * error on the calling thread is available from emx_last_error(). Handles
 * are opaque and owned by the caller, who releases them with the matching
 * *_destroy function. Complex arrays are interleaved (re, im) doubles.
 */
#ifndef EMX_EMX_H
#define EMX_EMX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EMX_BUILDING_LIBRARY)
#    define EMX_API __declspec(dllexport)
#  else
#    define EMX_API __declspec(dllimport)
#  endif
#else
#  define EMX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum emx_status {
  EMX_OK = 0,
  EMX_ERR_INVALID_ARGUMENT,
  EMX_ERR_UNKNOWN_PRESET,
  EMX_ERR_DOMAIN,
  EMX_ERR_DEGENERATE_COLUMN,
  EMX_ERR_ALL_TRUNCATED,
  EMX_ERR_CONVERGENCE,
  EMX_ERR_RANK_DEFICIENT,
  EMX_ERR_DEGENERATE_DESIGN,
  EMX_ERR_SIZE_MISMATCH,
  EMX_ERR_IO,
  EMX_ERR_CONFIG,
  EMX_ERR_INTERNAL
} emx_status;

typedef enum emx_method {
  EMX_METHOD_PINV = 0,
  EMX_METHOD_LCURVE = 1,
  EMX_METHOD_FIXED_GAMMA = 2
} emx_method;

typedef enum emx_format {
  EMX_FORMAT_CSV = 0,
  EMX_FORMAT_JSON = 1,
  EMX_FORMAT_PLOTDATA = 2
} emx_format;

typedef enum emx_kernel {
  EMX_KERNEL_RATIONAL = 0,
  EMX_KERNEL_SPECTRAL_RATIONAL = 1,
  EMX_KERNEL_FOURIER = 2,
  EMX_KERNEL_LAPLACE = 3,
  EMX_KERNEL_CAUCHY_SQUARED = 4
} emx_kernel;

typedef struct emx_sweep emx_sweep;
typedef struct emx_results emx_results;

/* One row of a sweep. String members point into the results handle and
 * stay valid until it is destroyed. */
typedef struct emx_record {
  const char* preset;
  const char* method;
  double method_parameter;
  double sigma;
  uint64_t seed;
  double location_error;
  double weight_error;
  double gamma_or_tol;
  double cond_v_minus;
  double svd_gap;
  double wall_time_ms;
  int ok;
  int flat_curve;
  int ill_conditioned_shift;
  const char* failed_stage;
  const char* failure;
} emx_record;

typedef struct emx_summary {
  const char* preset;
  const char* method;
  double method_parameter;
  double sigma;
  size_t runs;
  size_t failures;
  size_t flat_curves;
  double median_location_error;
  double iqr_location_error;
  double median_weight_error;
  double iqr_weight_error;
} emx_summary;

EMX_API const char* emx_version(void);
EMX_API const char* emx_status_string(emx_status status);
EMX_API const char* emx_last_error(void);

/* Sweep configuration. Setters override the preset and any loaded config. */
EMX_API emx_status emx_sweep_create(const char* preset, emx_sweep** out);
EMX_API void emx_sweep_destroy(emx_sweep* sweep);
EMX_API emx_status emx_sweep_load_config(emx_sweep* sweep, const char* path);
EMX_API emx_status emx_sweep_set_sigmas(emx_sweep* sweep, const double* sigmas, size_t count);
EMX_API emx_status emx_sweep_get_sigmas(const emx_sweep* sweep, double* sigmas, size_t capacity, size_t* count);
EMX_API emx_status emx_sweep_set_seeds(emx_sweep* sweep, const uint64_t* seeds, size_t count);
EMX_API emx_status emx_sweep_set_krylov_order(emx_sweep* sweep, int l);
EMX_API emx_status emx_sweep_set_tol_factor(emx_sweep* sweep, double tol_factor);
EMX_API emx_status emx_sweep_set_gamma(emx_sweep* sweep, double gamma);
EMX_API emx_status emx_sweep_set_beta(emx_sweep* sweep, double beta);
EMX_API emx_status emx_sweep_set_sample_seed(emx_sweep* sweep, uint64_t seed);
EMX_API emx_status emx_sweep_set_lcurve_grid(emx_sweep* sweep, int grid_size);
EMX_API emx_status emx_sweep_set_threads(emx_sweep* sweep, int threads);
/* Methods are snapshotted from the sweep's current tol_factor/gamma/l when
 * added. With no methods added, emx_sweep_run uses lcurve. */
EMX_API emx_status emx_sweep_add_method(emx_sweep* sweep, emx_method method);
EMX_API emx_status emx_sweep_run(const emx_sweep* sweep, emx_results** out);

EMX_API void emx_results_destroy(emx_results* results);
EMX_API size_t emx_results_count(const emx_results* results);
EMX_API size_t emx_results_failures(const emx_results* results);
EMX_API emx_status emx_results_get(const emx_results* results, size_t index, emx_record* out);
EMX_API size_t emx_results_summary_count(const emx_results* results);
EMX_API emx_status emx_results_summary_get(const emx_results* results, size_t index, emx_summary* out);
/* Writes records.csv, records.json or plotdata/ under dir. */
EMX_API emx_status emx_results_write(const emx_results* results, const char* dir, emx_format format,
                                     int include_timing);

/* Kernel evaluation g(s, x). */
EMX_API emx_status emx_kernel_eval(emx_kernel kernel, const double s[2], const double x[2], double out[2]);

/* Single recovery on caller-supplied data.
 * samples: n_s complex, nodes: n_a complex, observations: n_s complex.
 * domain_lo < domain_hi selects a real interval domain (recovered locations
 * are projected onto it); pass domain_lo >= domain_hi for the unit disk.
 * parameter is tol_factor (pinv) or gamma (fixed-gamma); ignored for lcurve.
 * l <= 0 selects 2 n_x + 2. locations and weights receive n_x complex
 * values; gamma_or_tol may be NULL. */
EMX_API emx_status emx_recover(emx_kernel kernel, double domain_lo, double domain_hi, const double* samples,
                               size_t n_s, const double* nodes, size_t n_a, const double* observations,
                               emx_method method, double parameter, int l, int n_x, double* locations,
                               double* weights, double* gamma_or_tol);

#ifdef __cplusplus
}
#endif

#endif /* EMX_EMX_H */
