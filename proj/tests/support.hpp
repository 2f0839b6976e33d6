#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "emx/rng.hpp"
#include "emx/types.hpp"

namespace emx::test {

inline CMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

inline CVector random_vector(Rng& rng, Eigen::Index n) { return random_matrix(rng, n, 1).col(0); }

/// U diag(s) V* with Haar-like unitary factors and singular values log-spaced
/// from 1 down to 1/cond.
inline CMatrix matrix_with_condition(Rng& rng, Eigen::Index rows, Eigen::Index cols, double cond) {
  Eigen::HouseholderQR<CMatrix> qu(random_matrix(rng, rows, cols));
  Eigen::HouseholderQR<CMatrix> qv(random_matrix(rng, cols, cols));
  const CMatrix U = qu.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix V = qv.householderQ() * CMatrix::Identity(cols, cols);
  RVector s(cols);
  for (Eigen::Index i = 0; i < cols; ++i)
    s[i] = cols == 1 ? 1.0 : std::pow(cond, -static_cast<double>(i) / static_cast<double>(cols - 1));
  return U * s.cast<Complex>().asDiagonal() * V.adjoint();
}

inline double rel_diff(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(b.norm(), 1e-300);
  return (a - b).norm() / scale;
}

/// Smallest sum of squared distances over all pairings, by brute force.
inline double brute_force_match(const CVector& truth, const CVector& found) {
  std::vector<int> perm(static_cast<size_t>(truth.size()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double cost = 0.0;
    for (size_t k = 0; k < perm.size(); ++k) cost += std::norm(truth[static_cast<Eigen::Index>(k)] - found[perm[k]]);
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best);
}

/// Dense oracle for (A*A + gamma^2 I) v = A* b: the equivalent stacked least
/// squares problem [A; gamma I] v = [b; 0] solved by Householder QR in long
/// double.
inline CVector dense_tikhonov(const CMatrix& A, const CVector& b, double gamma) {
  using LComplex = std::complex<long double>;
  using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = A.rows(), n = A.cols();
  LMatrix K = LMatrix::Zero(m + n, n);
  K.topRows(m) = A.cast<LComplex>();
  K.bottomRows(n).diagonal().setConstant(LComplex(gamma));
  LMatrix rhs = LMatrix::Zero(m + n, 1);
  rhs.topRows(m) = b.cast<LComplex>();
  const LMatrix v = K.householderQr().solve(rhs);
  return v.col(0).cast<Complex>();
}

}  // namespace emx::test
