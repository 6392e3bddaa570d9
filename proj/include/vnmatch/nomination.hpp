#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vnmatch/graph.hpp"
#include "vnmatch/soft_sgm.hpp"

namespace vnmatch {

struct VnConfig {
  /// Maximum path length from the vertex of interest to a usable seed.
  int h = 2;
  /// Maximum path length from the localized seeds when building the
  /// neighborhoods to match; must be >= h so the VOI lands inside its own
  /// matched neighborhood.
  int ell = 2;
  SoftSgmConfig soft;

  void validate() const {
    if (h < 1) throw std::invalid_argument("h must be >= 1");
    if (ell < h) throw std::invalid_argument("ell must be >= h");
    soft.validate();
  }
};

/// Ranked candidates for one vertex of interest. `stopped` marks the
/// no-local-seeds outcome, in which case the list is empty.
struct NominationList {
  std::string voi_label;
  /// (label in second graph, score), scores non-increasing; equal scores in
  /// label order.
  std::vector<std::pair<std::string, double>> candidates;
  double pad_mass = 0.0;
  int s_x = 0;
  int gx_vertices = 0;
  int gx2_vertices = 0;
  int candidate_count = 0;
  bool stopped = false;
  VnConfig config;
};

/// Sub-map of seed pairs whose first-graph vertex lies within distance h of
/// the vertex of interest. Empty means the pipeline must stop.
inline SeedMap localize_seeds(const Graph& g, const SeedMap& seeds,
                              const std::string& voi, int h) {
  int x = g.vertex(voi);
  for (const auto& [a, b] : seeds.pairs())
    if (a == voi)
      throw std::invalid_argument("localize_seeds: voi is a seed: " + voi);
  VertexSet near = neighborhood(g, {x}, h);
  std::vector<std::pair<std::string, std::string>> local;
  for (const auto& [a, b] : seeds.pairs()) {
    int idx = g.vertex(a);
    if (std::binary_search(near.begin(), near.end(), idx))
      local.emplace_back(a, b);
  }
  return SeedMap(std::move(local));
}

/// Localize seeds near the VOI, soft-match the ell-neighborhood subgraphs of
/// the localized seed sets in both graphs, and rank the second graph's
/// non-seed neighborhood vertices by the VOI's row of the soft match.
inline NominationList nominate(const Graph& g, const Graph& g2,
                               const SeedMap& seeds, const std::string& voi,
                               const VnConfig& cfg) {
  cfg.validate();
  seeds.validate_against(g, g2);

  NominationList out;
  out.voi_label = voi;
  out.config = cfg;

  SeedMap local = localize_seeds(g, seeds, voi, cfg.h);
  out.s_x = local.size();
  if (local.empty()) {
    out.stopped = true;
    return out;
  }

  VertexSet sx_g, sx_g2;
  for (const auto& [a, b] : local.pairs()) {
    sx_g.push_back(g.vertex(a));
    sx_g2.push_back(g2.vertex(b));
  }
  VertexSet vx = neighborhood(g, sx_g, cfg.ell);
  if (!std::binary_search(vx.begin(), vx.end(), g.vertex(voi)))
    throw std::logic_error("nominate: voi outside its matched neighborhood");
  VertexSet vx2 = neighborhood(g2, sx_g2, cfg.ell);

  Graph gx = induced_subgraph(g, vx);
  Graph gx2 = induced_subgraph(g2, vx2);
  out.gx_vertices = gx.vertex_count();
  out.gx2_vertices = gx2.vertex_count();
  out.candidate_count = gx2.vertex_count() - local.size();

  SoftMatch match = soft_sgm(gx, gx2, local, cfg.soft);
  RowScores row = score_row(match, voi);
  out.pad_mass = row.pad_mass;
  out.candidates = std::move(row.candidates);
  std::sort(out.candidates.begin(), out.candidates.end(),
            [](const auto& lhs, const auto& rhs) {
              if (lhs.second != rhs.second) return lhs.second > rhs.second;
              return lhs.first < rhs.first;
            });
  return out;
}

/// Normalized expected rank of the true counterpart in a nomination list.
/// rank averages over uniformly random tie-breaking; tau rescales it to
/// [0, 1] (0 = top). Both are absent when the truth is not a candidate.
struct TauResult {
  std::optional<double> rank;
  std::optional<double> tau;
  int candidate_count = 0;
};

inline TauResult evaluate_tau(const NominationList& nl,
                              const std::string& truth) {
  TauResult out;
  out.candidate_count = nl.candidate_count;
  auto it = std::find_if(nl.candidates.begin(), nl.candidates.end(),
                         [&](const auto& c) { return c.first == truth; });
  if (it == nl.candidates.end()) return out;

  const double score = it->second;
  int greater = 0, tied = 0;
  for (const auto& [label, s] : nl.candidates) {
    if (s > score) ++greater;
    else if (s == score) ++tied;
  }
  double rank = greater + (tied + 1) / 2.0;
  out.rank = rank;
  if (nl.candidate_count <= 1) {
    out.tau = 0.0;
  } else {
    out.tau = std::max((rank - 1.0) / (nl.candidate_count - 1.0), 0.0);
  }
  return out;
}

}  // namespace vnmatch
