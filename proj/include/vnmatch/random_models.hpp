#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vnmatch/graph.hpp"
#include "vnmatch/rng.hpp"

namespace vnmatch {

/// Stochastic block model: contiguous blocks in vertex order, symmetric
/// probability matrix lambda over block pairs.
struct SbmSpec {
  std::vector<int> block_sizes;
  Eigen::MatrixXd lambda;

  int block_count() const { return static_cast<int>(lambda.rows()); }
  int vertex_count() const {
    int n = 0;
    for (int b : block_sizes) n += b;
    return n;
  }
  int block_of(int v) const {
    int offset = 0;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
      offset += block_sizes[b];
      if (v < offset) return static_cast<int>(b);
    }
    throw std::out_of_range("block_of: vertex out of range");
  }
  double edge_prob(int u, int v) const {
    return lambda(block_of(u), block_of(v));
  }

  void validate() const {
    if (lambda.rows() != lambda.cols() || lambda.rows() == 0)
      throw std::invalid_argument("sbm: lambda must be square and nonempty");
    if (static_cast<int>(block_sizes.size()) != lambda.rows())
      throw std::invalid_argument("sbm: block count mismatch");
    for (int b : block_sizes)
      if (b <= 0) throw std::invalid_argument("sbm: block sizes must be positive");
    for (int i = 0; i < lambda.rows(); ++i)
      for (int j = 0; j < lambda.cols(); ++j) {
        if (lambda(i, j) < 0.0 || lambda(i, j) > 1.0)
          throw std::invalid_argument("sbm: lambda entries must be in [0, 1]");
        if (lambda(i, j) != lambda(j, i))
          throw std::invalid_argument("sbm: lambda must be symmetric");
      }
  }
};

/// Assortative three-block probability matrix used as the default for the
/// tau sweep experiments.
inline Eigen::MatrixXd default_sweep_lambda() {
  Eigen::MatrixXd l(3, 3);
  l << 0.7, 0.3, 0.4,
       0.3, 0.7, 0.3,
       0.4, 0.3, 0.7;
  return l;
}

/// Sparser three-block matrix used by the neighborhood-size study.
inline Eigen::MatrixXd default_neighborhood_lambda() {
  Eigen::MatrixXd l = Eigen::MatrixXd::Constant(3, 3, 0.05);
  l.diagonal().setConstant(0.4);
  return l;
}

/// n vertices split into k blocks as evenly as possible (earlier blocks take
/// any remainder).
inline SbmSpec equal_blocks_sbm(int n, const Eigen::MatrixXd& lambda) {
  const int k = static_cast<int>(lambda.rows());
  if (k < 1 || n < k) throw std::invalid_argument("equal_blocks_sbm: bad sizes");
  SbmSpec spec;
  spec.lambda = lambda;
  spec.block_sizes.assign(static_cast<std::size_t>(k), n / k);
  for (int b = 0; b < n % k; ++b) ++spec.block_sizes[static_cast<std::size_t>(b)];
  spec.validate();
  return spec;
}

/// Random dot product graph: edge probabilities are pairwise dot products of
/// the latent position rows, which must all land in [0, 1].
struct RdpgSpec {
  Eigen::MatrixXd latent;

  int vertex_count() const { return static_cast<int>(latent.rows()); }
  double edge_prob(int u, int v) const {
    return latent.row(u).dot(latent.row(v));
  }

  void validate() const {
    if (latent.rows() == 0)
      throw std::invalid_argument("rdpg: latent positions must be nonempty");
    for (int i = 0; i < latent.rows(); ++i)
      for (int j = i; j < latent.rows(); ++j) {
        double p = latent.row(i).dot(latent.row(j));
        if (p < 0.0 || p > 1.0)
          throw std::invalid_argument(
              "rdpg: pairwise dot products must lie in [0, 1]");
      }
  }
};

using CoreModel = std::variant<SbmSpec, RdpgSpec>;

/// Extra vertices present in only one graph. For an SBM core they reuse the
/// core lambda, with block labels either given explicitly or drawn uniformly;
/// for an RDPG core their latent positions must be given.
struct UnsharedSpec {
  int count = 0;
  std::optional<std::vector<int>> blocks;
  std::optional<Eigen::MatrixXd> latent;
};

struct CorrelatedPairSpec {
  CoreModel core;
  double rho = 1.0;
  UnsharedSpec unshared_g;
  UnsharedSpec unshared_g2;
  std::uint64_t rng_seed = 0;
};

/// A sampled pair with its generation ground truth: the label bijection over
/// the shared vertices, and a designated vertex-of-interest pair. The seed
/// pool for experiments is the shared set minus the VOI.
struct LabeledPair {
  Graph g;
  Graph g2;
  std::vector<std::pair<std::string, std::string>> truth;
  std::string voi_g;
  std::string voi_g2;
};

/// One correlated Bernoulli(p) pair: the second draw is Bernoulli(p +
/// rho*(1-p)) after a one and Bernoulli(p*(1-rho)) after a zero, the unique
/// two-point joint with both marginals Bernoulli(p) and correlation rho.
/// Always consumes exactly two uniforms.
inline std::pair<int, int> sample_correlated_bernoulli_pair(double p,
                                                            double rho,
                                                            PhiloxRng& rng) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("correlated pair: p must be in [0, 1]");
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("correlated pair: rho must be in [0, 1]");
  int a = rng.bernoulli(p) ? 1 : 0;
  double q = a ? p + rho * (1.0 - p) : p * (1.0 - rho);
  int a2 = rng.bernoulli(q) ? 1 : 0;
  return {a, a2};
}

inline Graph sample_sbm(const SbmSpec& spec, PhiloxRng& rng,
                        const std::string& label_prefix = "v") {
  spec.validate();
  const int n = spec.vertex_count();
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels.push_back(label_prefix + std::to_string(i));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(spec.edge_prob(i, j))) edges.emplace_back(i, j);
  return Graph(std::move(labels), edges);
}

namespace detail {

/// Edge-probability view over one graph's full vertex set (core first, then
/// unshared).
struct EdgeProbModel {
  bool sbm = true;
  std::vector<int> blocks;
  Eigen::MatrixXd lambda;
  Eigen::MatrixXd latent;

  double prob(int u, int v) const {
    if (sbm)
      return lambda(blocks[static_cast<std::size_t>(u)],
                    blocks[static_cast<std::size_t>(v)]);
    return latent.row(u).dot(latent.row(v));
  }
};

inline EdgeProbModel extend_model(const CoreModel& core,
                                  const UnsharedSpec& unshared,
                                  PhiloxRng& rng) {
  EdgeProbModel model;
  if (std::holds_alternative<SbmSpec>(core)) {
    const auto& sbm = std::get<SbmSpec>(core);
    if (unshared.latent)
      throw std::invalid_argument("unshared latent positions given for an SBM core");
    model.sbm = true;
    model.lambda = sbm.lambda;
    model.blocks.reserve(
        static_cast<std::size_t>(sbm.vertex_count() + unshared.count));
    for (int v = 0; v < sbm.vertex_count(); ++v)
      model.blocks.push_back(sbm.block_of(v));
    if (unshared.blocks) {
      if (static_cast<int>(unshared.blocks->size()) != unshared.count)
        throw std::invalid_argument("unshared block list length mismatch");
      for (int b : *unshared.blocks) {
        if (b < 0 || b >= sbm.block_count())
          throw std::invalid_argument("unshared block label out of range");
        model.blocks.push_back(b);
      }
    } else {
      for (int t = 0; t < unshared.count; ++t)
        model.blocks.push_back(static_cast<int>(
            rng.next_below(static_cast<std::uint64_t>(sbm.block_count()))));
    }
  } else {
    const auto& rdpg = std::get<RdpgSpec>(core);
    if (unshared.blocks)
      throw std::invalid_argument("unshared block labels given for an RDPG core");
    model.sbm = false;
    int m = unshared.count;
    if (m > 0 && !unshared.latent)
      throw std::invalid_argument(
          "RDPG core: unshared vertices need explicit latent positions");
    if (m > 0 && (unshared.latent->rows() != m ||
                  unshared.latent->cols() != rdpg.latent.cols()))
      throw std::invalid_argument("unshared latent position shape mismatch");
    model.latent.resize(rdpg.latent.rows() + m, rdpg.latent.cols());
    model.latent.topRows(rdpg.latent.rows()) = rdpg.latent;
    if (m > 0) model.latent.bottomRows(m) = *unshared.latent;
    RdpgSpec combined{model.latent};
    combined.validate();
  }
  return model;
}

inline int core_vertex_count(const CoreModel& core) {
  if (std::holds_alternative<SbmSpec>(core))
    return std::get<SbmSpec>(core).vertex_count();
  return std::get<RdpgSpec>(core).vertex_count();
}

inline void validate_core(const CoreModel& core) {
  if (std::holds_alternative<SbmSpec>(core))
    std::get<SbmSpec>(core).validate();
  else
    std::get<RdpgSpec>(core).validate();
}

inline Graph shuffled_graph(std::vector<std::string> labels,
                            const std::vector<std::pair<int, int>>& edges,
                            PhiloxRng& rng) {
  const int n = static_cast<int>(labels.size());
  std::vector<int> order = rng.random_permutation(n);  // order[new] = old
  std::vector<int> to_new(static_cast<std::size_t>(n));
  std::vector<std::string> shuffled(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    to_new[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    shuffled[static_cast<std::size_t>(i)] =
        labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
  }
  std::vector<std::pair<int, int>> remapped;
  remapped.reserve(edges.size());
  for (const auto& [u, v] : edges)
    remapped.emplace_back(to_new[static_cast<std::size_t>(u)],
                          to_new[static_cast<std::size_t>(v)]);
  return Graph(std::move(shuffled), remapped);
}

}  // namespace detail

/// Samples a rho-correlated pair: shared-core edge slots are drawn jointly
/// with correlation rho, edges touching unshared vertices independently from
/// the extended model. The second graph's internal vertex order is shuffled
/// so nothing downstream can lean on index coincidences; the truth map
/// carries the real correspondence. Deterministic given spec.rng_seed.
inline LabeledPair sample_pair(const CorrelatedPairSpec& spec) {
  detail::validate_core(spec.core);
  if (spec.rho < 0.0 || spec.rho > 1.0)
    throw std::invalid_argument("sample_pair: rho must be in [0, 1]");
  PhiloxRng rng(spec.rng_seed);

  const int core_n = detail::core_vertex_count(spec.core);
  const int m = spec.unshared_g.count;
  const int m2 = spec.unshared_g2.count;
  if (m < 0 || m2 < 0)
    throw std::invalid_argument("sample_pair: unshared counts must be >= 0");
  detail::EdgeProbModel model_g =
      detail::extend_model(spec.core, spec.unshared_g, rng);
  detail::EdgeProbModel model_g2 =
      detail::extend_model(spec.core, spec.unshared_g2, rng);

  std::vector<std::pair<int, int>> edges_g, edges_g2;
  for (int i = 0; i < core_n; ++i)
    for (int j = i + 1; j < core_n; ++j) {
      auto [a, a2] =
          sample_correlated_bernoulli_pair(model_g.prob(i, j), spec.rho, rng);
      if (a) edges_g.emplace_back(i, j);
      if (a2) edges_g2.emplace_back(i, j);
    }
  const int eta = core_n + m;
  for (int i = 0; i < eta; ++i)
    for (int j = std::max(i + 1, core_n); j < eta; ++j)
      if (rng.bernoulli(model_g.prob(i, j))) edges_g.emplace_back(i, j);
  const int eta2 = core_n + m2;
  for (int i = 0; i < eta2; ++i)
    for (int j = std::max(i + 1, core_n); j < eta2; ++j)
      if (rng.bernoulli(model_g2.prob(i, j))) edges_g2.emplace_back(i, j);

  int voi = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(core_n)));

  std::vector<std::string> labels_g, labels_g2;
  for (int c = 0; c < core_n; ++c) labels_g.push_back("a" + std::to_string(c));
  for (int t = 0; t < m; ++t) labels_g.push_back("ja" + std::to_string(t));
  for (int c = 0; c < core_n; ++c) labels_g2.push_back("b" + std::to_string(c));
  for (int t = 0; t < m2; ++t) labels_g2.push_back("jb" + std::to_string(t));

  LabeledPair out;
  out.g = Graph(std::move(labels_g), edges_g);
  out.g2 = detail::shuffled_graph(std::move(labels_g2), edges_g2, rng);
  out.truth.reserve(static_cast<std::size_t>(core_n));
  for (int c = 0; c < core_n; ++c)
    out.truth.emplace_back("a" + std::to_string(c), "b" + std::to_string(c));
  out.voi_g = "a" + std::to_string(voi);
  out.voi_g2 = "b" + std::to_string(voi);
  return out;
}

/// Size-ratio construction: G is sampled on the full core, a uniformly random
/// ceil(r*N)-subset becomes the shared part, and G' is drawn rho-correlated
/// with the induced subgraph of G on that subset. The truth map covers the
/// shared subset only.
inline LabeledPair sample_ratio_pair(const SbmSpec& core, double r, double rho,
                                     PhiloxRng& rng) {
  core.validate();
  if (r <= 0.0 || r > 1.0)
    throw std::invalid_argument("sample_ratio_pair: r must be in (0, 1]");
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("sample_ratio_pair: rho must be in [0, 1]");
  const int n = core.vertex_count();
  const int shared_n = static_cast<int>(std::ceil(r * n));

  std::vector<int> picks = rng.random_permutation(n);
  picks.resize(static_cast<std::size_t>(shared_n));
  std::sort(picks.begin(), picks.end());
  std::vector<int> shared_pos(static_cast<std::size_t>(n), -1);
  for (int k = 0; k < shared_n; ++k)
    shared_pos[static_cast<std::size_t>(picks[static_cast<std::size_t>(k)])] = k;

  std::vector<std::pair<int, int>> edges_g, edges_g2;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double p = core.edge_prob(i, j);
      int pi = shared_pos[static_cast<std::size_t>(i)];
      int pj = shared_pos[static_cast<std::size_t>(j)];
      if (pi >= 0 && pj >= 0) {
        auto [a, a2] = sample_correlated_bernoulli_pair(p, rho, rng);
        if (a) edges_g.emplace_back(i, j);
        if (a2) edges_g2.emplace_back(pi, pj);
      } else if (rng.bernoulli(p)) {
        edges_g.emplace_back(i, j);
      }
    }

  int voi_k = static_cast<int>(
      rng.next_below(static_cast<std::uint64_t>(shared_n)));
  int voi = picks[static_cast<std::size_t>(voi_k)];

  std::vector<std::string> labels_g, labels_g2;
  for (int i = 0; i < n; ++i) labels_g.push_back("a" + std::to_string(i));
  for (int k = 0; k < shared_n; ++k)
    labels_g2.push_back("b" +
                        std::to_string(picks[static_cast<std::size_t>(k)]));

  LabeledPair out;
  out.g = Graph(std::move(labels_g), edges_g);
  out.g2 = detail::shuffled_graph(std::move(labels_g2), edges_g2, rng);
  out.truth.reserve(static_cast<std::size_t>(shared_n));
  for (int orig : picks)
    out.truth.emplace_back("a" + std::to_string(orig),
                           "b" + std::to_string(orig));
  out.voi_g = "a" + std::to_string(voi);
  out.voi_g2 = "b" + std::to_string(voi);
  return out;
}

}  // namespace vnmatch
