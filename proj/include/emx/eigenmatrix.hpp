#pragma once

#include <memory>
#include <string_view>

#include "emx/kernels.hpp"
#include "emx/regularization.hpp"

namespace emx {

enum class MethodVariant { OriginalPinv, RegularizedLCurve, RegularizedFixedGamma };

std::string_view to_string(MethodVariant variant);
/// Accepts the CLI spellings "pinv", "lcurve", "fixed-gamma".
MethodVariant parse_method(std::string_view name);

inline constexpr double kDefaultTolFactor = 1e-4;

struct MethodConfig {
  MethodVariant variant = MethodVariant::RegularizedLCurve;
  /// Pseudo-inverse threshold as a multiple of ||G_hat||_F (OriginalPinv).
  double tol_factor = kDefaultTolFactor;
  /// Tikhonov parameter (RegularizedFixedGamma).
  double gamma = 1e-3;
  /// Highest Krylov power; 0 selects the default 2 n_x + 2.
  int l = 0;
  int n_x = 1;
  int lcurve_grid = kDefaultLCurveGridSize;
  /// Overrides the variant's built-in gamma choice for the regularized variants.
  std::shared_ptr<const ParameterSelector> selector;

  int krylov_order() const { return l > 0 ? l : 2 * n_x + 2; }
  /// Throws InvalidArgument unless n_x >= 1, l > n_x and the variant's parameter is positive.
  void validate() const;
};

/// M = G_hat Lambda pinv_tol(G_hat), an n_s x n_s matrix.
struct EigenmatrixOperator {
  CMatrix M;
  Eigen::Index retained_rank = 0;
};

/// A = [u, ..., ]: n_s x (l + 1); column 0 is the noisy observation vector.
struct KrylovMatrix {
  CMatrix columns;
};

struct EspritResult {
  CVector locations;
  /// Condition number of V_-^*.
  double cond_v_minus = 0.0;
  /// sigma_{n_x}(A) / sigma_{n_x+1}(A); infinity when A has only n_x columns beyond the split.
  double svd_gap = 0.0;
  bool ill_conditioned_shift = false;
};

inline constexpr double kRankDeficientTolerance = 1e-13;
inline constexpr double kIllConditionedShift = 1e8;
inline constexpr double kWeightTruncation = 1e-12;

EigenmatrixOperator build_eigenmatrix(const CollocationSystem& system, const SvdFactors& g_hat_factors, double tol);
EigenmatrixOperator build_eigenmatrix(const CollocationSystem& system, double tol);

KrylovMatrix krylov_original(const EigenmatrixOperator& op, const CVector& u_noisy, int l);
KrylovMatrix krylov_regularized(const CollocationSystem& system, const CVector& v, const CVector& u_noisy, int l);

EspritResult esprit_extract(const KrylovMatrix& A, int n_x);

CVector recover_weights(const KernelDescriptor& kernel, const SampleSet& samples, const CVector& locations,
                        const CVector& u_noisy);

/// Everything about a problem that does not depend on the observations.
struct PreparedProblem {
  KernelDescriptor kernel;
  SampleSet samples;
  CollocationNodes nodes;
  CollocationSystem system;
  SvdFactors factors;  // of G_hat
};

PreparedProblem prepare_problem(const KernelDescriptor& kernel, const SampleSet& samples,
                                const CollocationNodes& nodes);

struct RecoveryDiagnostics {
  /// ESPRIT eigenvalues before any projection onto a real domain.
  CVector raw_locations;
  double cond_v_minus = 0.0;
  double svd_gap = 0.0;
  Eigen::Index rank_g_hat = 0;
  Eigen::Index rank_krylov = 0;
  bool flat_curve = false;
  bool ill_conditioned_shift = false;
  bool projected_to_real = false;
};

struct RecoveryResult {
  CVector locations;
  CVector weights;
  /// Threshold tol for OriginalPinv, gamma for the regularized variants.
  double gamma_or_tol = 0.0;
  RecoveryDiagnostics diagnostics;
};

RecoveryResult recover(const MethodConfig& config, const PreparedProblem& problem, const Observations& obs);
RecoveryResult recover(const MethodConfig& config, const KernelDescriptor& kernel, const SampleSet& samples,
                       const CollocationNodes& nodes, const Observations& obs);

}  // namespace emx
