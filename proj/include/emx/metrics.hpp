#pragma once

#include <vector>

#include "emx/eigenmatrix.hpp"

namespace emx {

struct ErrorPair {
  double location_error = 0.0;
  double weight_error = 0.0;
  /// matching[k] is the index of the recovered spike paired with truth spike k.
  std::vector<int> matching;
};

/// Largest n_x for which every permutation is enumerated; larger problems
/// use the Hungarian algorithm, which is also exact.
inline constexpr int kExhaustiveMatchingLimit = 8;

/// Pairs recovered spikes with the truth by minimizing sum_k |x_k - x~_pi(k)|^2,
/// then reports (||x - x~_pi||_2, ||w - w~_pi||_2) under that pairing.
ErrorPair match_and_error(const SpikeSignal& truth, const SpikeSignal& recovered);
ErrorPair match_and_error(const SpikeSignal& truth, const RecoveryResult& recovered);

}  // namespace emx
