#include "emx/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace emx {

namespace {

bool all_finite(const CMatrix& m) {
  return m.unaryExpr([](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); })
      .all();
}

// Projection of the right-hand side on the retained left singular vectors,
// plus the squared norm of what is left over (outside the range).
struct SpectralRhs {
  CVector beta;
  double perp_sq = 0.0;
};

SpectralRhs project(const SvdFactors& f, const CVector& rhs) {
  if (rhs.size() != f.left_vectors.rows())
    throw Error(ErrorCode::SizeMismatch, "right-hand side length does not match the factored matrix");
  SpectralRhs out;
  out.beta = f.left_vectors.adjoint() * rhs;
  out.perp_sq = (rhs - f.left_vectors * out.beta).squaredNorm();
  return out;
}

struct NormsAndCurvature {
  double residual_norm;
  double solution_norm;
  double curvature;
};

// Follows the standard L-curve curvature expression: with filter factors
// f_i = s_i^2 / (s_i^2 + g^2), eta = ||v_g||, rho = ||A v_g - b||, the
// curvature of (log rho, log eta) is built from d/dg and d^2/dg^2 of both.
NormsAndCurvature evaluate(const RVector& s, const SpectralRhs& p, double gamma) {
  const double g2 = gamma * gamma;
  double eta_sq = 0.0, rho_sq = p.perp_sq;
  double phi = 0.0, psi = 0.0, dphi = 0.0, dpsi = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double s2 = s[i] * s[i];
    const double f = s2 / (s2 + g2);
    const double cf = g2 / (s2 + g2);
    const double beta2 = std::norm(p.beta[i]);
    const double xi2 = beta2 / s2;
    const double f1 = -2.0 * f * cf / gamma;
    const double f2 = -f1 * (3.0 - 4.0 * f) / gamma;
    eta_sq += f * f * xi2;
    rho_sq += cf * cf * beta2;
    phi += f * f1 * xi2;
    psi += cf * f1 * beta2;
    dphi += (f1 * f1 + f * f2) * xi2;
    dpsi += (-f1 * f1 + cf * f2) * beta2;
  }
  const double eta = std::sqrt(eta_sq);
  const double rho = std::sqrt(rho_sq);
  NormsAndCurvature out{rho, eta, 0.0};
  if (eta == 0.0 || rho == 0.0) return out;

  const double deta = phi / eta;
  const double drho = -psi / rho;
  const double ddeta = dphi / eta - deta * (deta / eta);
  const double ddrho = -dpsi / rho - drho * (drho / rho);
  const double dlogeta = deta / eta;
  const double dlogrho = drho / rho;
  const double ddlogeta = ddeta / eta - dlogeta * dlogeta;
  const double ddlogrho = ddrho / rho - dlogrho * dlogrho;
  const double denom = std::pow(dlogrho * dlogrho + dlogeta * dlogeta, 1.5);
  if (denom > 0.0 && std::isfinite(denom))
    out.curvature = (dlogrho * ddlogeta - ddlogrho * dlogeta) / denom;
  return out;
}

CVector filtered_solution(const SvdFactors& f, const CVector& beta, double gamma) {
  const RVector& s = f.singular_values;
  const RVector filt = s.array() / (s.array().square() + gamma * gamma);
  return f.right_vectors * (filt.cast<Complex>().asDiagonal() * beta);
}

CVector refine(const SvdFactors& f, const CVector& rhs, CVector v, double gamma) {
  if (f.matrix.size() == 0) return v;
  using LComplex = std::complex<long double>;
  using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
  using LVector = Eigen::Matrix<LComplex, Eigen::Dynamic, 1>;
  const LMatrix A = f.matrix.cast<LComplex>();
  const LVector b = rhs.cast<LComplex>();
  const long double g2 = static_cast<long double>(gamma) * gamma;
  auto normal_residual = [&](const CVector& x) -> CVector {
    const LVector xl = x.cast<LComplex>();
    const LVector r = A.adjoint() * (b - A * xl) - g2 * xl;
    return r.cast<Complex>();
  };
  const RVector& s = f.singular_values;
  const RVector inv = (s.array().square() + gamma * gamma).inverse();
  CVector r = normal_residual(v);
  double rnorm = r.norm();
  for (int it = 0; it < 3 && rnorm > 0.0; ++it) {
    const CVector Vr = f.right_vectors.adjoint() * r;
    const CVector in_range = f.right_vectors * Vr;
    const CVector step = f.right_vectors * (inv.cast<Complex>().asDiagonal() * Vr) + (r - in_range) / (gamma * gamma);
    CVector next = v + step;
    CVector r_next = normal_residual(next);
    if (!(r_next.norm() < rnorm)) break;
    v = std::move(next);
    r = std::move(r_next);
    rnorm = r.norm();
  }
  return v;
}

TikhonovSolution finish(const SvdFactors& f, const CVector& rhs, CVector v, double gamma) {
  TikhonovSolution out;
  out.gamma = gamma;
  out.solution_norm = v.norm();
  const CVector Av = f.matrix.size() ? CVector(f.matrix * v)
                                     : CVector(f.left_vectors * (f.singular_values.cast<Complex>().asDiagonal() *
                                                                 (f.right_vectors.adjoint() * v)));
  out.residual_norm = (Av - rhs).norm();
  out.v_gamma = std::move(v);
  return out;
}

}  // namespace

CMatrix SvdFactors::reconstruct() const {
  return left_vectors * singular_values.cast<Complex>().asDiagonal() * right_vectors.adjoint();
}

SvdFactors compute_svd(const CMatrix& matrix, double drop_below) {
  if (!all_finite(matrix)) throw Error(ErrorCode::ConvergenceFailure, "SVD input contains non-finite entries");
  Eigen::JacobiSVD<CMatrix, Eigen::ColPivHouseholderQRPreconditioner> svd(
      matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  if (!s.allFinite()) throw Error(ErrorCode::ConvergenceFailure, "SVD produced non-finite singular values");
  const double cut = s.size() ? drop_below * s[0] : 0.0;
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > cut && s[r] > 0.0) ++r;
  SvdFactors out;
  out.singular_values = s.head(r);
  out.left_vectors = svd.matrixU().leftCols(r);
  out.right_vectors = svd.matrixV().leftCols(r);
  out.matrix = matrix;
  return out;
}

RVector singular_values(const CMatrix& matrix) {
  if (!all_finite(matrix)) throw Error(ErrorCode::ConvergenceFailure, "SVD input contains non-finite entries");
  Eigen::JacobiSVD<CMatrix, Eigen::ColPivHouseholderQRPreconditioner> svd(matrix);
  return svd.singularValues();
}

Eigen::Index numerical_rank(const RVector& s, double rel_tol) {
  if (s.size() == 0) return 0;
  const double cut = rel_tol * s.maxCoeff();
  return (s.array() > cut).count();
}

double condition_number(const RVector& s) {
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double lo = s.minCoeff();
  return lo > 0.0 ? s.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

CVector truncated_pinv_apply(const SvdFactors& factors, double tol, const CVector& rhs) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "pseudo-inverse tolerance must be positive");
  const Eigen::Index keep = (factors.singular_values.array() >= tol).count();
  if (keep == 0) throw Error(ErrorCode::AllTruncated, "every singular value lies below the threshold");
  if (rhs.size() != factors.left_vectors.rows())
    throw Error(ErrorCode::SizeMismatch, "right-hand side length does not match the factored matrix");
  const CVector coeff = factors.left_vectors.leftCols(keep).adjoint() * rhs;
  const RVector inv = factors.singular_values.head(keep).cwiseInverse();
  return factors.right_vectors.leftCols(keep) * (inv.cast<Complex>().asDiagonal() * coeff);
}

TikhonovSolution tikhonov_solve(const SvdFactors& factors, const CVector& rhs, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "Tikhonov parameter must be positive");
  const SpectralRhs p = project(factors, rhs);
  return finish(factors, rhs, refine(factors, rhs, filtered_solution(factors, p.beta, gamma), gamma), gamma);
}

std::pair<double, double> lcurve_range(const SvdFactors& factors) {
  const RVector& s = factors.singular_values;
  if (s.size() < 2) throw Error(ErrorCode::InvalidArgument, "L-curve needs at least two singular values");
  return {std::max(s[s.size() - 1], kLCurveFloor * s[0]), s[0]};
}

double lcurve_curvature(const SvdFactors& factors, const CVector& rhs, double gamma) {
  return evaluate(factors.singular_values, project(factors, rhs), gamma).curvature;
}

std::vector<LCurvePoint> lcurve_points(const SvdFactors& factors, const CVector& rhs, int grid_size) {
  if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "L-curve grid needs at least two points");
  const auto [lo, hi] = lcurve_range(factors);
  const SpectralRhs p = project(factors, rhs);
  const double llo = std::log(lo), lhi = std::log(hi);
  std::vector<LCurvePoint> pts(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    const double gamma = k == 0                ? lo
                         : k == grid_size - 1 ? hi
                                              : std::exp(llo + (lhi - llo) * k / (grid_size - 1));
    const auto e = evaluate(factors.singular_values, p, gamma);
    pts[k] = {gamma, e.residual_norm, e.solution_norm, e.curvature};
  }
  return pts;
}

TikhonovSolution lcurve_select(const SvdFactors& factors, const CVector& rhs, int grid_size) {
  if (grid_size < 16) throw Error(ErrorCode::InvalidArgument, "L-curve grid size must be at least 16");
  const auto [lo, hi] = lcurve_range(factors);
  if (rhs.norm() == 0.0) {
    TikhonovSolution zero;
    zero.v_gamma = CVector::Zero(factors.right_vectors.rows());
    zero.gamma = hi;
    zero.flat_curve = true;
    return zero;
  }

  const auto pts = lcurve_points(factors, rhs, grid_size);
  std::size_t best = 0;
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (pts[k].curvature > pts[best].curvature) best = k;

  if (best == 0 || best + 1 == pts.size()) {
    auto sol = tikhonov_solve(factors, rhs, pts[best].gamma);
    sol.flat_curve = true;
    return sol;
  }

  // Golden-section refinement of the maximum over the two adjacent cells, in log(gamma).
  const SpectralRhs p = project(factors, rhs);
  auto kappa = [&](double lg) { return evaluate(factors.singular_values, p, std::exp(lg)).curvature; };
  constexpr double invphi = 0.6180339887498949;
  double a = std::log(pts[best - 1].gamma), b = std::log(pts[best + 1].gamma);
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double kc = kappa(c), kd = kappa(d);
  for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
    if (kc > kd) {
      b = d; d = c; kd = kc;
      c = b - invphi * (b - a); kc = kappa(c);
    } else {
      a = c; c = d; kc = kd;
      d = a + invphi * (b - a); kd = kappa(d);
    }
  }
  double gamma = std::exp(0.5 * (a + b));
  if (kappa(std::log(gamma)) < pts[best].curvature) gamma = pts[best].gamma;
  gamma = std::clamp(gamma, lo, hi);
  return tikhonov_solve(factors, rhs, gamma);
}

}  // namespace emx
