#include "emx/eigenmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace emx {

std::string_view to_string(MethodVariant variant) {
  switch (variant) {
    case MethodVariant::OriginalPinv: return "pinv";
    case MethodVariant::RegularizedLCurve: return "lcurve";
    case MethodVariant::RegularizedFixedGamma: return "fixed-gamma";
  }
  return "?";
}

MethodVariant parse_method(std::string_view name) {
  if (name == "pinv") return MethodVariant::OriginalPinv;
  if (name == "lcurve") return MethodVariant::RegularizedLCurve;
  if (name == "fixed-gamma") return MethodVariant::RegularizedFixedGamma;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

void MethodConfig::validate() const {
  if (n_x < 1) throw Error(ErrorCode::InvalidArgument, "spike count n_x must be >= 1");
  if (krylov_order() <= n_x) throw Error(ErrorCode::InvalidArgument, "Krylov order l must exceed n_x");
  if (variant == MethodVariant::OriginalPinv && !(tol_factor > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tol_factor must be positive");
  if (variant == MethodVariant::RegularizedFixedGamma && !(gamma > 0.0))
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
}

EigenmatrixOperator build_eigenmatrix(const CollocationSystem& system, const SvdFactors& f, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "pseudo-inverse tolerance must be positive");
  const Eigen::Index keep = (f.singular_values.array() >= tol).count();
  if (keep == 0) throw Error(ErrorCode::AllTruncated, "every singular value of G_hat lies below the threshold");
  // pinv_tol = V_k diag(1/s_k) U_k^*, so M = (G_hat Lambda V_k diag(1/s_k)) U_k^*.
  const RVector inv = f.singular_values.head(keep).cwiseInverse();
  const CMatrix left = system.G_hat * system.nodes.asDiagonal() * f.right_vectors.leftCols(keep) *
                       inv.cast<Complex>().asDiagonal();
  return {left * f.left_vectors.leftCols(keep).adjoint(), keep};
}

EigenmatrixOperator build_eigenmatrix(const CollocationSystem& system, double tol) {
  return build_eigenmatrix(system, compute_svd(system.G_hat), tol);
}

KrylovMatrix krylov_original(const EigenmatrixOperator& op, const CVector& u_noisy, int l) {
  if (l < 1) throw Error(ErrorCode::InvalidArgument, "Krylov order l must be >= 1");
  if (op.M.cols() != u_noisy.size()) throw Error(ErrorCode::SizeMismatch, "observation length does not match M");
  KrylovMatrix A{CMatrix(u_noisy.size(), l + 1)};
  A.columns.col(0) = u_noisy;
  for (int k = 1; k <= l; ++k) A.columns.col(k).noalias() = op.M * A.columns.col(k - 1);
  return A;
}

KrylovMatrix krylov_regularized(const CollocationSystem& system, const CVector& v, const CVector& u_noisy, int l) {
  if (l < 1) throw Error(ErrorCode::InvalidArgument, "Krylov order l must be >= 1");
  if (v.size() != system.G_hat.cols()) throw Error(ErrorCode::SizeMismatch, "v must have one entry per node");
  if (u_noisy.size() != system.G_hat.rows())
    throw Error(ErrorCode::SizeMismatch, "observation length does not match G_hat");
  KrylovMatrix A{CMatrix(u_noisy.size(), l + 1)};
  A.columns.col(0) = u_noisy;
  CVector powered = v;
  for (int k = 1; k <= l; ++k) {
    powered = powered.cwiseProduct(system.nodes);
    A.columns.col(k).noalias() = system.G_hat * powered;
  }
  return A;
}

EspritResult esprit_extract(const KrylovMatrix& A, int n_x) {
  const CMatrix& a = A.columns;
  if (n_x < 1) throw Error(ErrorCode::InvalidArgument, "n_x must be >= 1");
  if (a.rows() < n_x || a.cols() < n_x + 1)
    throw Error(ErrorCode::InvalidArgument, "Krylov matrix too small for the requested spike count");

  Eigen::JacobiSVD<CMatrix, Eigen::ColPivHouseholderQRPreconditioner> svd(a, Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  if (!s.allFinite()) throw Error(ErrorCode::ConvergenceFailure, "SVD of the Krylov matrix did not converge");
  if (!(s[n_x - 1] >= kRankDeficientTolerance * s[0]))
    throw Error(ErrorCode::RankDeficient, "Krylov matrix has numerical rank below n_x");

  EspritResult out;
  out.svd_gap = n_x < s.size() ? (s[n_x] > 0.0 ? s[n_x - 1] / s[n_x] : std::numeric_limits<double>::infinity())
                               : std::numeric_limits<double>::infinity();

  // Rows of V^* for the leading n_x singular triplets; V_+^* drops the first
  // column, V_-^* the last.
  const CMatrix vh = svd.matrixV().leftCols(n_x).adjoint();
  const Eigen::Index l = vh.cols() - 1;
  const CMatrix v_plus = vh.rightCols(l);
  const CMatrix v_minus = vh.leftCols(l);

  // X = V_+^* (V_-^*)^+ via the least-squares problem (V_-^*)^* X^* = (V_+^*)^*.
  Eigen::JacobiSVD<CMatrix> shift(v_minus.adjoint(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.cond_v_minus = condition_number(shift.singularValues());
  out.ill_conditioned_shift = !(out.cond_v_minus <= kIllConditionedShift);
  const CMatrix X = shift.solve(v_plus.adjoint()).adjoint();

  Eigen::ComplexEigenSolver<CMatrix> eig(X, false);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "shift eigenproblem did not converge");
  out.locations = eig.eigenvalues();
  return out;
}

CVector recover_weights(const KernelDescriptor& kernel, const SampleSet& samples, const CVector& locations,
                        const CVector& u_noisy) {
  if (u_noisy.size() != samples.points.size())
    throw Error(ErrorCode::SizeMismatch, "observation length does not match the sample set");
  const CMatrix design = kernel_matrix(kernel, samples.points, locations);
  const SvdFactors f = compute_svd(design, kWeightTruncation);
  if (f.rank() == 0) throw Error(ErrorCode::DegenerateDesign, "weight design matrix is zero");
  const RVector inv = f.singular_values.cwiseInverse();
  return f.right_vectors * (inv.cast<Complex>().asDiagonal() * (f.left_vectors.adjoint() * u_noisy));
}

PreparedProblem prepare_problem(const KernelDescriptor& kernel, const SampleSet& samples,
                                const CollocationNodes& nodes) {
  PreparedProblem p{kernel, samples, nodes, build_collocation_system(kernel, samples, nodes), {}};
  p.factors = compute_svd(p.system.G_hat);
  return p;
}

namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.with_stage(name);
  }
}

}  // namespace

RecoveryResult recover(const MethodConfig& config, const PreparedProblem& problem, const Observations& obs) {
  stage("config", [&] { config.validate(); return 0; });
  const int l = config.krylov_order();
  const CVector& u = obs.noisy;
  if (u.size() != problem.samples.points.size())
    throw Error(ErrorCode::SizeMismatch, "observation length does not match the sample set", "config");

  RecoveryResult result;
  KrylovMatrix A;
  if (config.variant == MethodVariant::OriginalPinv) {
    const double tol = config.tol_factor * problem.system.G_hat.norm();
    const auto op = stage("eigenmatrix", [&] { return build_eigenmatrix(problem.system, problem.factors, tol); });
    result.gamma_or_tol = tol;
    result.diagnostics.rank_g_hat = op.retained_rank;
    A = stage("krylov", [&] { return krylov_original(op, u, l); });
  } else {
    const auto sol = stage("regularization", [&] {
      if (config.selector) return config.selector->select(problem.factors, u);
      if (config.variant == MethodVariant::RegularizedFixedGamma) return tikhonov_solve(problem.factors, u, config.gamma);
      return lcurve_select(problem.factors, u, config.lcurve_grid);
    });
    result.gamma_or_tol = sol.gamma;
    result.diagnostics.flat_curve = sol.flat_curve;
    result.diagnostics.rank_g_hat = problem.factors.rank();
    A = stage("krylov", [&] { return krylov_regularized(problem.system, sol.v_gamma, u, l); });
  }

  const auto es = stage("esprit", [&] { return esprit_extract(A, config.n_x); });
  result.diagnostics.raw_locations = es.locations;
  result.diagnostics.cond_v_minus = es.cond_v_minus;
  result.diagnostics.svd_gap = es.svd_gap;
  result.diagnostics.ill_conditioned_shift = es.ill_conditioned_shift;
  result.diagnostics.rank_krylov = numerical_rank(singular_values(A.columns), kRankDeficientTolerance);

  result.locations = es.locations;
  const Domain& dom = problem.kernel.domain;
  if (dom.is_real()) {
    for (auto& x : result.locations) x = std::clamp(x.real(), dom.lo, dom.hi);
    result.diagnostics.projected_to_real = true;
  }

  result.weights = stage("weights", [&] { return recover_weights(problem.kernel, problem.samples, result.locations, u); });
  return result;
}

RecoveryResult recover(const MethodConfig& config, const KernelDescriptor& kernel, const SampleSet& samples,
                       const CollocationNodes& nodes, const Observations& obs) {
  const auto problem = stage("collocation", [&] { return prepare_problem(kernel, samples, nodes); });
  return recover(config, problem, obs);
}

}  // namespace emx
