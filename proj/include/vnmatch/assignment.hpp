#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace vnmatch {

struct AssignmentResult {
  /// permutation[i] = column assigned to row i; a bijection on {0..k-1}.
  std::vector<int> permutation;
  /// Sum of the selected entries of the input matrix.
  double objective = 0.0;
};

/// Exact linear assignment maximizing sum_i m(i, permutation[i]) over all
/// permutations, via Jonker-Volgenant shortest augmenting paths on the
/// negated matrix (O(k^3)). Entries may be negative. Deterministic: rows are
/// processed in ascending order and ties go to the lowest-indexed column
/// reached first.
inline AssignmentResult max_assignment(const Eigen::MatrixXd& m) {
  const int k = static_cast<int>(m.rows());
  if (k < 1 || m.cols() != m.rows())
    throw std::invalid_argument("max_assignment: matrix must be square, k >= 1");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (!std::isfinite(m(i, j)))
        throw std::invalid_argument("max_assignment: non-finite entry");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Minimize cost = -m with row/column potentials u, v (1-based internals).
  std::vector<double> u(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(k) + 1, 0);  // col -> row
  std::vector<int> way(static_cast<std::size_t>(k) + 1, 0);

  for (int i = 1; i <= k; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(k) + 1, kInf);
    std::vector<bool> used(static_cast<std::size_t>(k) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      int i0 = match[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double cur = -m(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                     v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] +=
              delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult result;
  result.permutation.assign(static_cast<std::size_t>(k), -1);
  for (int j = 1; j <= k; ++j)
    result.permutation[static_cast<std::size_t>(
        match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  for (int i = 0; i < k; ++i)
    result.objective += m(i, result.permutation[static_cast<std::size_t>(i)]);
  return result;
}

/// Dense 0/1 matrix of a permutation given as sigma[i] = assigned column.
inline Eigen::MatrixXd permutation_matrix(const std::vector<int>& sigma) {
  const int k = static_cast<int>(sigma.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) p(i, sigma[static_cast<std::size_t>(i)]) = 1.0;
  return p;
}

}  // namespace vnmatch
