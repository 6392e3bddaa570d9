#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace vnmatch {

/// Set of internal vertex indices of one graph, kept sorted and unique.
using VertexSet = std::vector<int>;

constexpr int kHopInfinity = std::numeric_limits<int>::max();

/// Simple undirected graph: no self-loops, no multi-edges, symmetric
/// adjacency. Vertices carry opaque string labels (unique within a graph)
/// and dense internal indices 0..n-1. Immutable after construction, so
/// values can be shared freely across worker threads.
class Graph {
 public:
  Graph() = default;

  /// Builds from labels and edges over internal indices. Self-loops are
  /// dropped and duplicate edges collapsed.
  Graph(std::vector<std::string> labels,
        const std::vector<std::pair<int, int>>& edges)
      : labels_(std::move(labels)) {
    const int n = static_cast<int>(labels_.size());
    index_.reserve(labels_.size());
    for (int v = 0; v < n; ++v) {
      if (!index_.emplace(labels_[static_cast<std::size_t>(v)], v).second)
        throw std::invalid_argument("duplicate vertex label: " +
                                    labels_[static_cast<std::size_t>(v)]);
    }
    adj_.assign(labels_.size(), {});
    for (const auto& [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::invalid_argument("edge endpoint out of range");
      if (u == v) continue;
      adj_[static_cast<std::size_t>(u)].push_back(v);
      adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    edge_count_ = 0;
    for (auto& nbrs : adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      edge_count_ += nbrs.size();
    }
    edge_count_ /= 2;
  }

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int v) const {
    return labels_[static_cast<std::size_t>(check_vertex(v))];
  }

  std::optional<int> find_vertex(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Index of `label`; throws naming the label when absent.
  int vertex(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
      throw std::invalid_argument("unknown vertex label: " + label);
    return it->second;
  }

  const std::vector<int>& neighbors(int v) const {
    return adj_[static_cast<std::size_t>(check_vertex(v))];
  }

  int degree(int v) const {
    return static_cast<int>(neighbors(v).size());
  }

  bool has_edge(int u, int v) const {
    const auto& nbrs = neighbors(u);
    check_vertex(v);
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
  }

  /// All edges as (u, v) with u < v, in ascending order.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int u = 0; u < vertex_count(); ++u)
      for (int v : adj_[static_cast<std::size_t>(u)])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

 private:
  int check_vertex(int v) const {
    if (v < 0 || v >= vertex_count())
      throw std::out_of_range("vertex index out of range: " +
                              std::to_string(v));
    return v;
  }

  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> adj_;
  std::size_t edge_count_ = 0;
};

/// Known-correspondence pairs (label in G, label in G'). Injective in both
/// coordinates, so it encodes a bijection between the two seed sets.
class SeedMap {
 public:
  SeedMap() = default;

  SeedMap(std::initializer_list<std::pair<std::string, std::string>> pairs)
      : SeedMap(std::vector<std::pair<std::string, std::string>>(pairs)) {}

  explicit SeedMap(std::vector<std::pair<std::string, std::string>> pairs)
      : pairs_(std::move(pairs)) {
    std::unordered_set<std::string> left, right;
    for (const auto& [a, b] : pairs_) {
      if (!left.insert(a).second)
        throw std::invalid_argument("seed label repeated in first graph: " + a);
      if (!right.insert(b).second)
        throw std::invalid_argument("seed label repeated in second graph: " +
                                    b);
    }
  }

  int size() const { return static_cast<int>(pairs_.size()); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<std::pair<std::string, std::string>>& pairs() const {
    return pairs_;
  }

  /// Checks that every referenced label exists in its graph.
  void validate_against(const Graph& g, const Graph& g2) const {
    for (const auto& [a, b] : pairs_) {
      g.vertex(a);
      g2.vertex(b);
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
};

// ---------------------------------------------------------------------------
// Edge-list I/O
//
// Format: UTF-8 text, one edge per line, two labels separated by whitespace
// or a single comma; '#' starts a comment line. A line with a single label
// declares an isolated vertex, which keeps save/load lossless for graphs
// that have them.

struct EdgeListData {
  Graph graph;
  std::size_t loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::string normalized = line;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream iss(normalized);
  std::vector<std::string> tokens;
  std::string tok;
  while (iss >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace detail

inline EdgeListData load_edge_list(std::istream& in) {
  EdgeListData out;
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;
  std::vector<std::pair<int, int>> edges;
  std::unordered_set<std::uint64_t> seen;

  auto intern = [&](const std::string& label) {
    auto it = index.find(label);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(labels.size());
    labels.push_back(label);
    index.emplace(label, id);
    return id;
  };

  std::string line;
  std::size_t line_no = 0;
  bool any_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto tokens = detail::split_tokens(line);
    if (tokens.empty()) continue;
    any_content = true;
    if (tokens.size() == 1) {
      intern(tokens[0]);
      continue;
    }
    if (tokens.size() != 2)
      throw std::runtime_error("edge list line " + std::to_string(line_no) +
                               ": expected one or two labels, got " +
                               std::to_string(tokens.size()));
    int u = intern(tokens[0]);
    int v = intern(tokens[1]);
    if (u == v) {
      ++out.loops_dropped;
      continue;
    }
    int lo = std::min(u, v), hi = std::max(u, v);
    std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) |
                        static_cast<std::uint32_t>(hi);
    if (!seen.insert(key).second) {
      ++out.duplicates_collapsed;
      continue;
    }
    edges.emplace_back(u, v);
  }
  if (!any_content) throw std::runtime_error("edge list input is empty");
  out.graph = Graph(std::move(labels), edges);
  return out;
}

inline void save_edge_list(const Graph& g, std::ostream& out) {
  std::vector<bool> covered(static_cast<std::size_t>(g.vertex_count()), false);
  for (const auto& [u, v] : g.edges()) {
    covered[static_cast<std::size_t>(u)] = true;
    covered[static_cast<std::size_t>(v)] = true;
    out << g.label(u) << ' ' << g.label(v) << '\n';
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!covered[static_cast<std::size_t>(v)]) out << g.label(v) << '\n';
}

/// Seed file: one pair per line, (label in G, label in G'), same comment and
/// separator rules as edge lists.
inline SeedMap load_seed_map(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto tokens = detail::split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2)
      throw std::runtime_error("seed file line " + std::to_string(line_no) +
                               ": expected two labels");
    pairs.emplace_back(tokens[0], tokens[1]);
  }
  return SeedMap(std::move(pairs));
}

// ---------------------------------------------------------------------------
// Core operations

namespace detail {

inline VertexSet checked_sorted_set(const Graph& g, const VertexSet& t) {
  VertexSet s = t;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (int v : s)
    if (v < 0 || v >= g.vertex_count())
      throw std::out_of_range("vertex set member out of range: " +
                              std::to_string(v));
  return s;
}

}  // namespace detail

/// Induced subgraph of g on t: vertices of t (original labels kept, ordered
/// by ascending original index) and exactly the edges of g inside t.
inline Graph induced_subgraph(const Graph& g, const VertexSet& t) {
  if (t.empty()) throw std::invalid_argument("induced_subgraph: empty set");
  VertexSet members = detail::checked_sorted_set(g, t);
  std::vector<int> to_new(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<std::string> labels;
  labels.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    to_new[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
    labels.push_back(g.label(members[i]));
  }
  std::vector<std::pair<int, int>> edges;
  for (int u : members)
    for (int v : g.neighbors(u))
      if (u < v && to_new[static_cast<std::size_t>(v)] >= 0)
        edges.emplace_back(to_new[static_cast<std::size_t>(u)],
                           to_new[static_cast<std::size_t>(v)]);
  return Graph(std::move(labels), edges);
}

/// All vertices within shortest-path distance h of some seed (the seeds
/// themselves included). h = kHopInfinity walks whole components; h = 0
/// returns the seeds exactly.
inline VertexSet neighborhood(const Graph& g, const VertexSet& seeds, int h) {
  if (seeds.empty()) throw std::invalid_argument("neighborhood: empty seeds");
  if (h < 0) throw std::invalid_argument("neighborhood: negative hop count");
  VertexSet sources = detail::checked_sorted_set(g, seeds);
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::queue<int> frontier;
  for (int s : sources) {
    dist[static_cast<std::size_t>(s)] = 0;
    frontier.push(s);
  }
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    int du = dist[static_cast<std::size_t>(u)];
    if (du >= h) continue;
    for (int v : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = du + 1;
        frontier.push(v);
      }
    }
  }
  VertexSet result;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (dist[static_cast<std::size_t>(v)] >= 0) result.push_back(v);
  return result;
}

/// Dense 0/1 adjacency matrix: symmetric, zero diagonal.
inline Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v : g.neighbors(u)) a(u, v) = 1.0;
  return a;
}

struct ReorderedPair {
  Graph g;
  Graph g2;
  int seed_count = 0;
};

namespace detail {

inline Graph permute_vertices(const Graph& g, const std::vector<int>& order) {
  // order[new_index] = old_index
  std::vector<int> to_new(order.size());
  std::vector<std::string> labels;
  labels.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    to_new[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    labels.push_back(g.label(order[i]));
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edge_count());
  for (const auto& [u, v] : g.edges())
    edges.emplace_back(to_new[static_cast<std::size_t>(u)],
                       to_new[static_cast<std::size_t>(v)]);
  return Graph(std::move(labels), edges);
}

inline std::vector<int> seeds_first_order(const Graph& g,
                                          const std::vector<int>& seed_idx) {
  std::vector<bool> is_seed(static_cast<std::size_t>(g.vertex_count()), false);
  for (int s : seed_idx) is_seed[static_cast<std::size_t>(s)] = true;
  std::vector<int> order = seed_idx;
  order.reserve(static_cast<std::size_t>(g.vertex_count()));
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!is_seed[static_cast<std::size_t>(v)]) order.push_back(v);
  return order;
}

}  // namespace detail

/// Relabels both graphs internally so seed pair i sits at index i in each,
/// with non-seed relative order preserved and external labels unchanged.
inline ReorderedPair reorder_seeds_first(const Graph& g, const Graph& g2,
                                         const SeedMap& seeds) {
  std::vector<int> idx_g, idx_g2;
  idx_g.reserve(static_cast<std::size_t>(seeds.size()));
  idx_g2.reserve(static_cast<std::size_t>(seeds.size()));
  for (const auto& [a, b] : seeds.pairs()) {
    idx_g.push_back(g.vertex(a));
    idx_g2.push_back(g2.vertex(b));
  }
  ReorderedPair out;
  out.seed_count = seeds.size();
  out.g = detail::permute_vertices(g, detail::seeds_first_order(g, idx_g));
  out.g2 = detail::permute_vertices(g2, detail::seeds_first_order(g2, idx_g2));
  return out;
}

}  // namespace vnmatch
