#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vnmatch/graph.hpp"
#include "vnmatch/parallel.hpp"
#include "vnmatch/rng.hpp"
#include "vnmatch/sgm.hpp"

namespace vnmatch {

struct SoftSgmConfig {
  int restarts = 100;
  double gamma = 0.1;
  /// Relative objective-change stopping tolerance for each restart.
  double eps = 1e-6;
  int max_iter = 100;
  std::uint64_t rng_seed = 0;
  /// Worker pool for restarts; the result does not depend on it.
  int threads = 1;

  void validate() const {
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (gamma < 0.0 || gamma > 1.0)
      throw std::invalid_argument("gamma must be in [0, 1]");
    if (eps <= 0.0) throw std::invalid_argument("eps must be > 0");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  }
};

/// Randomized start beta*Q + (1-beta)*barycenter with Q a uniform random
/// permutation matrix and beta ~ Uniform(0, gamma). Draw order is fixed:
/// permutation first, then beta.
inline Eigen::MatrixXd random_start(int dim, double gamma, PhiloxRng& rng) {
  if (dim < 1) throw std::invalid_argument("random_start: dim must be >= 1");
  std::vector<int> sigma = rng.random_permutation(dim);
  double beta = gamma * rng.uniform_double();
  Eigen::MatrixXd start = barycenter(dim);
  start *= (1.0 - beta);
  for (int i = 0; i < dim; ++i)
    start(i, sigma[static_cast<std::size_t>(i)]) += beta;
  return start;
}

/// Pad column/row labels mark graph positions with no real counterpart.
inline std::string pad_label(int k) { return "⊥" + std::to_string(k); }

/// Soft correspondence from averaged restarts: p(i, j) is the fraction of
/// restarts whose projected permutation matched non-seed row i to non-seed
/// column j, so every entry is a multiple of 1/R and p is doubly stochastic.
struct SoftMatch {
  Eigen::MatrixXd p;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  /// Leading counts of row/col labels that are real vertices (the rest are
  /// padding on the smaller side).
  int real_rows = 0;
  int real_cols = 0;
  std::vector<std::pair<std::string, std::string>> seed_pairs;
  SoftSgmConfig config;
};

/// Full soft seeded matching of two labeled graphs: reorder seeds first,
/// center and pad, run `restarts` independent Frank-Wolfe solves from
/// randomized starts (restart i draws from sub-stream i of rng_seed), and
/// average the projected permutations. Deterministic for a fixed rng_seed,
/// independent of thread schedule.
inline SoftMatch soft_sgm(const Graph& g, const Graph& g2, const SeedMap& seeds,
                          const SoftSgmConfig& cfg) {
  cfg.validate();
  if (g.vertex_count() == 0 || g2.vertex_count() == 0)
    throw std::invalid_argument("soft_sgm: graphs must be nonempty");
  seeds.validate_against(g, g2);

  ReorderedPair ordered = reorder_seeds_first(g, g2, seeds);
  const int s = ordered.seed_count;
  PaddedPair pair = pad_and_center(adjacency_matrix(ordered.g),
                                   adjacency_matrix(ordered.g2), s);
  const int dim = pair.dim() - s;
  if (dim < 1)
    throw std::invalid_argument("soft_sgm: no non-seed vertices to match");

  std::vector<std::vector<int>> restarts(
      static_cast<std::size_t>(cfg.restarts));
  parallel_for(static_cast<std::size_t>(cfg.restarts), cfg.threads,
               [&](std::size_t i) {
                 PhiloxRng rng(cfg.rng_seed, /*stream=*/i);
                 Eigen::MatrixXd p0 = random_start(dim, cfg.gamma, rng);
                 restarts[i] =
                     frank_wolfe_sgm(pair, p0, cfg.eps, cfg.max_iter)
                         .permutation;
               });

  // Integer counts summed in restart order keep the average exact and
  // schedule-independent.
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(dim, dim);
  for (const auto& sigma : restarts)
    for (int r = 0; r < dim; ++r)
      counts(r, sigma[static_cast<std::size_t>(r)]) += 1;

  SoftMatch out;
  out.p = counts.cast<double>() / static_cast<double>(cfg.restarts);
  out.real_rows = ordered.g.vertex_count() - s;
  out.real_cols = ordered.g2.vertex_count() - s;
  out.row_labels.reserve(static_cast<std::size_t>(dim));
  out.col_labels.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i)
    out.row_labels.push_back(i < out.real_rows
                                 ? ordered.g.label(s + i)
                                 : pad_label(i - out.real_rows));
  for (int j = 0; j < dim; ++j)
    out.col_labels.push_back(j < out.real_cols
                                 ? ordered.g2.label(s + j)
                                 : pad_label(j - out.real_cols));
  out.seed_pairs = seeds.pairs();
  out.config = cfg;
  return out;
}

struct RowScores {
  /// Real (non-pad) candidate columns with their p values, in column order.
  std::vector<std::pair<std::string, double>> candidates;
  /// Mass the row places on pad columns: likelihood of no correspondence.
  double pad_mass = 0.0;
};

inline RowScores score_row(const SoftMatch& m, const std::string& voi_label) {
  auto it = std::find(m.row_labels.begin(),
                      m.row_labels.begin() + m.real_rows, voi_label);
  if (it == m.row_labels.begin() + m.real_rows) {
    for (const auto& [a, b] : m.seed_pairs)
      if (a == voi_label)
        throw std::invalid_argument("score_row: label is a seed: " + voi_label);
    throw std::invalid_argument("score_row: unknown row label: " + voi_label);
  }
  int row = static_cast<int>(it - m.row_labels.begin());
  RowScores out;
  out.candidates.reserve(static_cast<std::size_t>(m.real_cols));
  for (int c = 0; c < m.real_cols; ++c)
    out.candidates.emplace_back(m.col_labels[static_cast<std::size_t>(c)],
                                m.p(row, c));
  for (int c = m.real_cols; c < m.p.cols(); ++c) out.pad_mass += m.p(row, c);
  return out;
}

}  // namespace vnmatch
