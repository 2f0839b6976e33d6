#pragma once

#include <memory>
#include <vector>

#include "emx/types.hpp"

namespace emx {

/// Thin SVD A = U diag(sigma) V* restricted to the retained rank r.
struct SvdFactors {
  CMatrix left_vectors;    // n_s x r
  RVector singular_values; // r, nonincreasing, positive
  CMatrix right_vectors;   // n_a x r
  /// The decomposed matrix; when present, Tikhonov solves are refined against it.
  CMatrix matrix;

  Eigen::Index rank() const { return singular_values.size(); }
  double largest() const { return singular_values.size() ? singular_values[0] : 0.0; }
  CMatrix reconstruct() const;
};

/// Singular values dropped from the factors when below this multiple of sigma_max.
inline constexpr double kSvdDropTolerance = 1e-15;

SvdFactors compute_svd(const CMatrix& matrix, double drop_below = kSvdDropTolerance);

/// All min(m, n) singular values, nonincreasing.
RVector singular_values(const CMatrix& matrix);
/// Number of singular values strictly above rel_tol * sigma_max.
Eigen::Index numerical_rank(const RVector& singular_values, double rel_tol);
/// sigma_max / sigma_min over all singular values (infinity if sigma_min == 0).
double condition_number(const RVector& singular_values);

/// Sum over sigma_i >= tol of sigma_i^-1 (u_i* rhs) v_i. Throws AllTruncated
/// when every singular value falls below tol.
CVector truncated_pinv_apply(const SvdFactors& factors, double tol, const CVector& rhs);

struct TikhonovSolution {
  CVector v_gamma;
  double gamma = 0.0;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
  /// Set when the parameter search found no interior curvature maximum, or
  /// the right-hand side was zero.
  bool flat_curve = false;
};

/// Minimizer of ||A v - rhs||^2 + gamma^2 ||v||^2 via SVD filter factors,
/// followed by iterative refinement of (A*A + gamma^2 I) v = A* rhs with
/// residuals accumulated in long double.
TikhonovSolution tikhonov_solve(const SvdFactors& factors, const CVector& rhs, double gamma);

struct LCurvePoint {
  double gamma = 0.0;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
  double curvature = 0.0;
};

inline constexpr int kDefaultLCurveGridSize = 200;
inline constexpr double kLCurveFloor = 1e-12;

/// Search range [max(sigma_r, 1e-12 sigma_1), sigma_1].
std::pair<double, double> lcurve_range(const SvdFactors& factors);

/// Log-spaced L-curve samples over lcurve_range, smallest gamma first.
std::vector<LCurvePoint> lcurve_points(const SvdFactors& factors, const CVector& rhs,
                                       int grid_size = kDefaultLCurveGridSize);

/// Curvature of (log residual_norm, log solution_norm) at gamma, from
/// analytic derivatives of the SVD expansion. Positive at a corner.
double lcurve_curvature(const SvdFactors& factors, const CVector& rhs, double gamma);

/// Tikhonov solution at the maximum-curvature point of the L-curve,
/// refined by golden-section search over the neighbouring grid cells.
TikhonovSolution lcurve_select(const SvdFactors& factors, const CVector& rhs,
                               int grid_size = kDefaultLCurveGridSize);

/// Strategy for choosing gamma. Implementations must be stateless or
/// internally synchronized; one selector is shared across sweep threads.
class ParameterSelector {
 public:
  virtual ~ParameterSelector() = default;
  virtual TikhonovSolution select(const SvdFactors& factors, const CVector& rhs) const = 0;
  virtual const char* name() const = 0;
};

class LCurveSelector final : public ParameterSelector {
 public:
  explicit LCurveSelector(int grid_size = kDefaultLCurveGridSize) : grid_size_(grid_size) {}
  TikhonovSolution select(const SvdFactors& factors, const CVector& rhs) const override {
    return lcurve_select(factors, rhs, grid_size_);
  }
  const char* name() const override { return "lcurve"; }

 private:
  int grid_size_;
};

class FixedGammaSelector final : public ParameterSelector {
 public:
  explicit FixedGammaSelector(double gamma) : gamma_(gamma) {}
  TikhonovSolution select(const SvdFactors& factors, const CVector& rhs) const override {
    return tikhonov_solve(factors, rhs, gamma_);
  }
  const char* name() const override { return "fixed-gamma"; }

 private:
  double gamma_;
};

}  // namespace emx
