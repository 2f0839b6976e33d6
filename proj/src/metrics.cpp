#include "emx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace emx {

namespace {

using CostMatrix = std::vector<std::vector<double>>;

std::vector<int> exhaustive(const CostMatrix& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<int> perm(n), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int k = 0; k < n; ++k) c += cost[k][perm[k]];
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Shortest augmenting path form of the Hungarian method, O(n^3).
std::vector<int> hungarian(const CostMatrix& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n);
  for (int j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;
  return match;
}

}  // namespace

ErrorPair match_and_error(const SpikeSignal& truth, const SpikeSignal& recovered) {
  const Eigen::Index n = truth.locations.size();
  if (recovered.locations.size() != n || truth.weights.size() != n || recovered.weights.size() != n)
    throw Error(ErrorCode::SizeMismatch, "truth and recovered spike counts differ");
  if (n == 0) return {};

  CostMatrix cost(n, std::vector<double>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) cost[i][j] = std::norm(truth.locations[i] - recovered.locations[j]);

  ErrorPair out;
  out.matching = n <= kExhaustiveMatchingLimit ? exhaustive(cost) : hungarian(cost);
  double loc = 0.0, w = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    loc += cost[k][out.matching[k]];
    w += std::norm(truth.weights[k] - recovered.weights[out.matching[k]]);
  }
  out.location_error = std::sqrt(loc);
  out.weight_error = std::sqrt(w);
  return out;
}

ErrorPair match_and_error(const SpikeSignal& truth, const RecoveryResult& recovered) {
  return match_and_error(truth, SpikeSignal{recovered.locations, recovered.weights});
}

}  // namespace emx
