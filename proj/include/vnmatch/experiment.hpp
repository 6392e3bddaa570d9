#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vnmatch/config.hpp"
#include "vnmatch/nomination.hpp"
#include "vnmatch/parallel.hpp"
#include "vnmatch/random_models.hpp"
#include "vnmatch/rng.hpp"
#include "vnmatch/serialize.hpp"

namespace vnmatch {

constexpr int kResultSchemaVersion = 1;

enum class ExperimentKind { SeedSweep, RatioSweep, NeighborhoodStudy };

inline std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SeedSweep: return "seed-sweep";
    case ExperimentKind::RatioSweep: return "ratio-sweep";
    case ExperimentKind::NeighborhoodStudy: return "neighborhood";
  }
  return "?";
}

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "seed-sweep") return ExperimentKind::SeedSweep;
  if (s == "ratio-sweep") return ExperimentKind::RatioSweep;
  if (s == "neighborhood") return ExperimentKind::NeighborhoodStudy;
  throw std::runtime_error("unknown experiment kind: " + s);
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::SeedSweep;

  // Model for the shared core.
  int vertices = 300;
  Eigen::MatrixXd lambda;  // defaults per kind when empty
  std::optional<std::vector<int>> block_sizes;

  // Seed sweep grid.
  std::vector<double> rho_values{0.6};
  std::vector<int> seed_counts{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  // Ratio sweep grid.
  std::vector<double> ratios{0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55,
                             0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90,
                             0.95, 1.00};
  double ratio_rho = 0.6;
  int ratio_seed_count = 4;

  // Neighborhood study grid.
  std::vector<int> h_values{1, 2, 3, 4, 5};
  std::vector<int> seed_totals{10, 30};

  int replicates = 100;
  std::uint64_t rng_seed = 0;
  std::string output_dir = "out";
  int h = 2;
  int ell = 2;
  SoftSgmConfig soft;
  int threads = 0;  // replicate pool; 0 = hardware
  bool dump_nominations = false;

  SbmSpec core_spec() const {
    Eigen::MatrixXd l = lambda.size() > 0
                            ? lambda
                            : (kind == ExperimentKind::NeighborhoodStudy
                                   ? default_neighborhood_lambda()
                                   : default_sweep_lambda());
    if (block_sizes) {
      SbmSpec spec{*block_sizes, l};
      spec.validate();
      if (spec.vertex_count() != vertices)
        throw std::runtime_error("config: block sizes do not sum to vertices");
      return spec;
    }
    return equal_blocks_sbm(vertices, l);
  }

  void validate() const {
    core_spec();
    if (replicates < 1) throw std::runtime_error("config: replicates must be >= 1");
    if (h < 1 || ell < h) throw std::runtime_error("config: need ell >= h >= 1");
    soft.validate();
    switch (kind) {
      case ExperimentKind::SeedSweep:
        if (rho_values.empty() || seed_counts.empty())
          throw std::runtime_error("config: empty seed-sweep grid");
        for (double r : rho_values)
          if (r < 0.0 || r > 1.0)
            throw std::runtime_error("config: rho must be in [0, 1]");
        for (int s : seed_counts)
          if (s < 1 || s > vertices - 2)
            throw std::runtime_error("config: seed count out of range");
        break;
      case ExperimentKind::RatioSweep:
        if (ratios.empty()) throw std::runtime_error("config: empty ratio grid");
        for (double r : ratios)
          if (r <= 0.0 || r > 1.0)
            throw std::runtime_error("config: ratios must be in (0, 1]");
        if (ratio_rho < 0.0 || ratio_rho > 1.0)
          throw std::runtime_error("config: rho must be in [0, 1]");
        if (ratio_seed_count < 1)
          throw std::runtime_error("config: seed count must be >= 1");
        break;
      case ExperimentKind::NeighborhoodStudy:
        if (h_values.empty() || seed_totals.empty())
          throw std::runtime_error("config: empty neighborhood grid");
        for (int hv : h_values)
          if (hv < 0) throw std::runtime_error("config: h values must be >= 0");
        for (int s : seed_totals)
          if (s < 1 || s > vertices - 1)
            throw std::runtime_error("config: seed total out of range");
        break;
    }
  }

  static ExperimentConfig from_ini(
      const IniDoc& doc, std::optional<ExperimentKind> kind = std::nullopt) {
    ExperimentConfig cfg;
    if (doc.has("experiment", "kind")) {
      cfg.kind = experiment_kind_from_string(doc.get("experiment", "kind"));
      if (kind && *kind != cfg.kind)
        throw std::runtime_error(
            "config: [experiment] kind does not match the requested experiment");
    } else if (kind) {
      cfg.kind = *kind;
    } else {
      throw std::runtime_error("config: missing [experiment] kind");
    }
    cfg.replicates =
        static_cast<int>(doc.get_int_or("experiment", "replicates", 100));
    cfg.rng_seed = doc.get_u64_or("experiment", "rng_seed", 0);
    cfg.output_dir = doc.get_or("experiment", "output_dir", "out");
    cfg.threads = static_cast<int>(doc.get_int_or("experiment", "threads", 0));
    cfg.h = static_cast<int>(doc.get_int_or("experiment", "h", 2));
    cfg.ell = static_cast<int>(doc.get_int_or("experiment", "ell", cfg.h));
    cfg.dump_nominations =
        doc.get_or("experiment", "dump_nominations", "false") == "true";
    if (doc.has("experiment", "seed_counts"))
      cfg.seed_counts = doc.get_int_list("experiment", "seed_counts");
    if (doc.has("experiment", "rho"))
      cfg.rho_values = doc.get_double_list("experiment", "rho");
    if (doc.has("experiment", "ratios"))
      cfg.ratios = doc.get_double_list("experiment", "ratios");
    cfg.ratio_rho = doc.get_double_or("experiment", "ratio_rho", 0.6);
    cfg.ratio_seed_count =
        static_cast<int>(doc.get_int_or("experiment", "ratio_seed_count", 4));
    if (doc.has("experiment", "h_values"))
      cfg.h_values = doc.get_int_list("experiment", "h_values");
    if (doc.has("experiment", "seed_totals"))
      cfg.seed_totals = doc.get_int_list("experiment", "seed_totals");

    cfg.vertices = static_cast<int>(doc.get_int_or("model", "vertices", 300));
    if (doc.has("model", "lambda")) cfg.lambda = doc.get_matrix("model", "lambda");
    if (doc.has("model", "block_sizes"))
      cfg.block_sizes = doc.get_int_list("model", "block_sizes");

    cfg.soft.restarts =
        static_cast<int>(doc.get_int_or("soft", "restarts", 100));
    cfg.soft.gamma = doc.get_double_or("soft", "gamma", 0.1);
    cfg.soft.eps = doc.get_double_or("soft", "eps", 1e-6);
    cfg.soft.max_iter = static_cast<int>(doc.get_int_or("soft", "max_iter", 100));
    cfg.validate();
    return cfg;
  }
};

/// One row per (grid point, replicate). Grid columns not swept by the
/// experiment stay absent and serialize as NA; wall_ms is the only
/// non-reproducible column.
struct ResultRow {
  std::string experiment;
  int replicate = 0;
  std::optional<double> rho;
  std::optional<int> s_x_requested;
  std::optional<double> ratio;
  std::optional<int> h;
  std::optional<int> seed_total;
  int s_x = 0;
  std::optional<double> tau;
  std::optional<double> rank;
  int candidate_count = 0;
  int gx_vertices = 0;
  int gx2_vertices = 0;
  double wall_ms = 0.0;

  /// Present only when nomination dumping is enabled.
  std::string nomination_json_text;
  std::string truth_label;
};

struct AggregateRow {
  std::optional<double> rho;
  std::optional<int> s_x_requested;
  std::optional<double> ratio;
  std::optional<int> h;
  std::optional<int> seed_total;
  int n = 0;
  int na_count = 0;
  std::optional<double> mean_tau;
  std::optional<double> se2_tau;
  double mean_s_x = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "NA";
  return std::string(buf, ptr);
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : "NA";
}

inline std::string fmt_opt(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "NA";
}

struct GridKey {
  std::optional<double> rho;
  std::optional<int> s_x_requested;
  std::optional<double> ratio;
  std::optional<int> h;
  std::optional<int> seed_total;
  bool operator<(const GridKey& o) const {
    auto tie = [](const GridKey& k) {
      return std::make_tuple(k.rho.value_or(-2.0), k.s_x_requested.value_or(-2),
                             k.ratio.value_or(-2.0), k.h.value_or(-2),
                             k.seed_total.value_or(-2));
    };
    return tie(*this) < tie(o);
  }
};

}  // namespace detail

/// Groups rows by their grid point (first-appearance order) and computes the
/// tau mean with a 2-standard-error half width over non-NA values, plus the
/// NA count and the mean localized seed count.
inline std::vector<AggregateRow> aggregate_rows(
    const std::vector<ResultRow>& rows) {
  std::vector<detail::GridKey> order;
  std::map<detail::GridKey, std::vector<const ResultRow*>> groups;
  for (const auto& row : rows) {
    detail::GridKey key{row.rho, row.s_x_requested, row.ratio, row.h,
                        row.seed_total};
    auto [it, inserted] = groups.emplace(key, std::vector<const ResultRow*>{});
    if (inserted) order.push_back(key);
    it->second.push_back(&row);
  }
  std::vector<AggregateRow> out;
  out.reserve(order.size());
  for (const auto& key : order) {
    const auto& members = groups.at(key);
    AggregateRow agg;
    agg.rho = key.rho;
    agg.s_x_requested = key.s_x_requested;
    agg.ratio = key.ratio;
    agg.h = key.h;
    agg.seed_total = key.seed_total;
    agg.n = static_cast<int>(members.size());
    double sx_sum = 0.0;
    std::vector<double> taus;
    for (const ResultRow* row : members) {
      sx_sum += row->s_x;
      if (row->tau) taus.push_back(*row->tau);
      else ++agg.na_count;
    }
    agg.mean_s_x = sx_sum / agg.n;
    if (!taus.empty()) {
      double mean = 0.0;
      for (double t : taus) mean += t;
      mean /= static_cast<double>(taus.size());
      agg.mean_tau = mean;
      if (taus.size() > 1) {
        double ss = 0.0;
        for (double t : taus) ss += (t - mean) * (t - mean);
        double sd = std::sqrt(ss / (static_cast<double>(taus.size()) - 1.0));
        agg.se2_tau = 2.0 * sd / std::sqrt(static_cast<double>(taus.size()));
      } else {
        agg.se2_tau = 0.0;
      }
    }
    out.push_back(agg);
  }
  return out;
}

inline void write_result_csv(const std::vector<ResultRow>& rows,
                             std::ostream& out) {
  out << "schema_version,experiment,replicate,rho,s_x_requested,r,h,"
         "seed_total,s_x,tau,rank,candidate_count,gx_vertices,gx2_vertices,"
         "wall_ms\n";
  for (const auto& row : rows) {
    out << kResultSchemaVersion << ',' << row.experiment << ','
        << row.replicate << ',' << detail::fmt_opt(row.rho) << ','
        << detail::fmt_opt(row.s_x_requested) << ','
        << detail::fmt_opt(row.ratio) << ',' << detail::fmt_opt(row.h) << ','
        << detail::fmt_opt(row.seed_total) << ',' << row.s_x << ','
        << detail::fmt_opt(row.tau) << ',' << detail::fmt_opt(row.rank) << ','
        << row.candidate_count << ',' << row.gx_vertices << ','
        << row.gx2_vertices << ',' << detail::fmt_double(row.wall_ms) << '\n';
  }
}

inline void write_aggregate_csv(const std::string& experiment,
                                const std::vector<AggregateRow>& aggs,
                                std::ostream& out) {
  out << "schema_version,experiment,rho,s_x_requested,r,h,seed_total,n,"
         "na_count,mean_tau,se2_tau,mean_s_x\n";
  for (const auto& a : aggs) {
    out << kResultSchemaVersion << ',' << experiment << ','
        << detail::fmt_opt(a.rho) << ',' << detail::fmt_opt(a.s_x_requested)
        << ',' << detail::fmt_opt(a.ratio) << ',' << detail::fmt_opt(a.h)
        << ',' << detail::fmt_opt(a.seed_total) << ',' << a.n << ','
        << a.na_count << ',' << detail::fmt_opt(a.mean_tau) << ','
        << detail::fmt_opt(a.se2_tau) << ',' << detail::fmt_double(a.mean_s_x)
        << '\n';
  }
}

inline std::vector<ResultRow> parse_result_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 15)
      throw std::runtime_error("result csv: expected 15 fields per row");
    auto opt_d = [](const std::string& s) -> std::optional<double> {
      if (s == "NA") return std::nullopt;
      return std::stod(s);
    };
    auto opt_i = [](const std::string& s) -> std::optional<int> {
      if (s == "NA") return std::nullopt;
      return std::stoi(s);
    };
    ResultRow row;
    row.experiment = fields[1];
    row.replicate = std::stoi(fields[2]);
    row.rho = opt_d(fields[3]);
    row.s_x_requested = opt_i(fields[4]);
    row.ratio = opt_d(fields[5]);
    row.h = opt_i(fields[6]);
    row.seed_total = opt_i(fields[7]);
    row.s_x = std::stoi(fields[8]);
    row.tau = opt_d(fields[9]);
    row.rank = opt_d(fields[10]);
    row.candidate_count = std::stoi(fields[11]);
    row.gx_vertices = std::stoi(fields[12]);
    row.gx2_vertices = std::stoi(fields[13]);
    row.wall_ms = std::stod(fields[14]);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

/// Draws `count` distinct seed pairs from the shared pool (truth minus the
/// VOI pair), uniformly at random.
inline SeedMap choose_seeds(const LabeledPair& pair, int count,
                            PhiloxRng& rng) {
  std::vector<int> pool;
  pool.reserve(pair.truth.size());
  for (std::size_t i = 0; i < pair.truth.size(); ++i)
    if (pair.truth[i].first != pair.voi_g) pool.push_back(static_cast<int>(i));
  if (count > static_cast<int>(pool.size()))
    throw std::runtime_error("not enough shared vertices to draw seeds");
  rng.shuffle(pool);
  std::vector<std::pair<std::string, std::string>> chosen;
  chosen.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    chosen.push_back(pair.truth[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])]);
  return SeedMap(std::move(chosen));
}

struct NominationOutcome {
  NominationList list;
  TauResult tau;
  std::string truth_label;
};

inline NominationOutcome nominate_and_score(const LabeledPair& pair,
                                            const SeedMap& seeds,
                                            const VnConfig& cfg) {
  NominationOutcome out;
  out.list = nominate(pair.g, pair.g2, seeds, pair.voi_g, cfg);
  out.truth_label = pair.voi_g2;
  out.tau = evaluate_tau(out.list, pair.voi_g2);
  return out;
}

inline void fill_row(ResultRow& row, const NominationOutcome& outcome) {
  row.s_x = outcome.list.s_x;
  row.tau = outcome.tau.tau;
  row.rank = outcome.tau.rank;
  row.candidate_count = outcome.list.candidate_count;
  row.gx_vertices = outcome.list.gx_vertices;
  row.gx2_vertices = outcome.list.gx2_vertices;
}

}  // namespace detail

/// Runs the configured experiment. Rows come back in grid-then-replicate
/// order and are a deterministic function of (config, rng_seed): replicate
/// work items execute in a bounded pool but every random draw is keyed by
/// the task index.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg);

namespace detail {

inline ExperimentResult run_seed_sweep(const ExperimentConfig& cfg) {
  struct Task {
    double rho;
    int seeds;
    int replicate;
  };
  std::vector<Task> tasks;
  for (double rho : cfg.rho_values)
    for (int s : cfg.seed_counts)
      for (int rep = 0; rep < cfg.replicates; ++rep)
        tasks.push_back({rho, s, rep});

  ExperimentResult result;
  result.rows.resize(tasks.size());
  SbmSpec core = cfg.core_spec();
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    auto start = std::chrono::steady_clock::now();

    CorrelatedPairSpec spec;
    spec.core = core;
    spec.rho = task.rho;
    spec.rng_seed = derive_seed(cfg.rng_seed, t, 1);
    LabeledPair pair = sample_pair(spec);

    PhiloxRng select_rng(derive_seed(cfg.rng_seed, t, 2));
    SeedMap seeds = choose_seeds(pair, task.seeds, select_rng);

    VnConfig vn;
    vn.h = cfg.h;
    vn.ell = cfg.ell;
    vn.soft = cfg.soft;
    vn.soft.threads = 1;
    vn.soft.rng_seed = derive_seed(cfg.rng_seed, t, 3);
    NominationOutcome outcome = nominate_and_score(pair, seeds, vn);

    ResultRow& row = result.rows[t];
    row.experiment = to_string(cfg.kind);
    row.replicate = task.replicate;
    row.rho = task.rho;
    row.s_x_requested = task.seeds;
    fill_row(row, outcome);
    if (cfg.dump_nominations) {
      row.nomination_json_text = nomination_json(outcome.list).dump();
      row.truth_label = outcome.truth_label;
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  });
  result.aggregates = aggregate_rows(result.rows);
  return result;
}

inline ExperimentResult run_ratio_sweep(const ExperimentConfig& cfg) {
  struct Task {
    double ratio;
    int replicate;
  };
  std::vector<Task> tasks;
  for (double r : cfg.ratios)
    for (int rep = 0; rep < cfg.replicates; ++rep) tasks.push_back({r, rep});

  ExperimentResult result;
  result.rows.resize(tasks.size());
  SbmSpec core = cfg.core_spec();
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    auto start = std::chrono::steady_clock::now();

    PhiloxRng pair_rng(derive_seed(cfg.rng_seed, t, 1));
    LabeledPair pair =
        sample_ratio_pair(core, task.ratio, cfg.ratio_rho, pair_rng);

    PhiloxRng select_rng(derive_seed(cfg.rng_seed, t, 2));
    SeedMap seeds = choose_seeds(pair, cfg.ratio_seed_count, select_rng);

    VnConfig vn;
    vn.h = cfg.h;
    vn.ell = cfg.ell;
    vn.soft = cfg.soft;
    vn.soft.threads = 1;
    vn.soft.rng_seed = derive_seed(cfg.rng_seed, t, 3);
    NominationOutcome outcome = nominate_and_score(pair, seeds, vn);

    ResultRow& row = result.rows[t];
    row.experiment = to_string(cfg.kind);
    row.replicate = task.replicate;
    row.rho = cfg.ratio_rho;
    row.s_x_requested = cfg.ratio_seed_count;
    row.ratio = task.ratio;
    fill_row(row, outcome);
    if (cfg.dump_nominations) {
      row.nomination_json_text = nomination_json(outcome.list).dump();
      row.truth_label = outcome.truth_label;
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  });
  result.aggregates = aggregate_rows(result.rows);
  return result;
}

inline ExperimentResult run_neighborhood_study(const ExperimentConfig& cfg) {
  struct Task {
    std::size_t seed_total_idx;
    int seed_total;
    int replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t si = 0; si < cfg.seed_totals.size(); ++si)
    for (int rep = 0; rep < cfg.replicates; ++rep)
      tasks.push_back({si, cfg.seed_totals[si], rep});

  // Row layout: for each seed_total, for each h, all replicates.
  const std::size_t per_seed_total = cfg.h_values.size() *
                                     static_cast<std::size_t>(cfg.replicates);
  ExperimentResult result;
  result.rows.resize(cfg.seed_totals.size() * per_seed_total);
  SbmSpec core = cfg.core_spec();

  parallel_for(tasks.size(), cfg.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    auto start = std::chrono::steady_clock::now();
    PhiloxRng rng(derive_seed(cfg.rng_seed, t, 1));
    Graph g = sample_sbm(core, rng);
    const int n = g.vertex_count();
    int voi = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    std::vector<int> others;
    others.reserve(static_cast<std::size_t>(n) - 1);
    for (int v = 0; v < n; ++v)
      if (v != voi) others.push_back(v);
    rng.shuffle(others);
    others.resize(static_cast<std::size_t>(task.seed_total));

    // Single BFS from the VOI serves every h in the grid.
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::queue<int> frontier;
    dist[static_cast<std::size_t>(voi)] = 0;
    frontier.push(voi);
    while (!frontier.empty()) {
      int u = frontier.front();
      frontier.pop();
      for (int v : g.neighbors(u))
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] =
              dist[static_cast<std::size_t>(u)] + 1;
          frontier.push(v);
        }
    }

    double wall = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    for (std::size_t hi = 0; hi < cfg.h_values.size(); ++hi) {
      int hv = cfg.h_values[hi];
      int local = 0;
      int reach = 0;
      for (int v = 0; v < n; ++v) {
        int d = dist[static_cast<std::size_t>(v)];
        if (d >= 0 && d <= hv) ++reach;
      }
      for (int s : others) {
        int d = dist[static_cast<std::size_t>(s)];
        if (d >= 0 && d <= hv) ++local;
      }
      std::size_t idx = task.seed_total_idx * per_seed_total +
                        hi * static_cast<std::size_t>(cfg.replicates) +
                        static_cast<std::size_t>(task.replicate);
      ResultRow& row = result.rows[idx];
      row.experiment = to_string(cfg.kind);
      row.replicate = task.replicate;
      row.h = hv;
      row.seed_total = task.seed_total;
      row.s_x = local;
      row.gx_vertices = reach;
      row.wall_ms = wall;
    }
  });
  result.aggregates = aggregate_rows(result.rows);
  return result;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case ExperimentKind::SeedSweep: return detail::run_seed_sweep(cfg);
    case ExperimentKind::RatioSweep: return detail::run_ratio_sweep(cfg);
    case ExperimentKind::NeighborhoodStudy:
      return detail::run_neighborhood_study(cfg);
  }
  throw std::logic_error("unreachable experiment kind");
}

inline nlohmann::json experiment_manifest_json(const ExperimentConfig& cfg) {
  SbmSpec core = cfg.core_spec();
  nlohmann::json lambda = nlohmann::json::array();
  for (int i = 0; i < core.lambda.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < core.lambda.cols(); ++j) row.push_back(core.lambda(i, j));
    lambda.push_back(row);
  }
  nlohmann::json j;
  j["schema_version"] = kResultSchemaVersion;
  j["kind"] = to_string(cfg.kind);
  j["vertices"] = cfg.vertices;
  j["block_sizes"] = core.block_sizes;
  j["lambda"] = lambda;
  j["replicates"] = cfg.replicates;
  j["rng_seed"] = cfg.rng_seed;
  j["h"] = cfg.h;
  j["ell"] = cfg.ell;
  j["soft"] = soft_config_json(cfg.soft);
  switch (cfg.kind) {
    case ExperimentKind::SeedSweep:
      j["rho"] = cfg.rho_values;
      j["seed_counts"] = cfg.seed_counts;
      break;
    case ExperimentKind::RatioSweep:
      j["ratios"] = cfg.ratios;
      j["ratio_rho"] = cfg.ratio_rho;
      j["ratio_seed_count"] = cfg.ratio_seed_count;
      break;
    case ExperimentKind::NeighborhoodStudy:
      j["h_values"] = cfg.h_values;
      j["seed_totals"] = cfg.seed_totals;
      break;
  }
  return j;
}

/// Parsed `generate` config: the pair spec plus where to write the files.
struct GeneratePlan {
  CorrelatedPairSpec spec;
  std::string output_dir = "out";
};

inline GeneratePlan parse_generate_config(const IniDoc& doc) {
  GeneratePlan plan;
  std::string type = doc.get_or("model", "type", "sbm");
  if (type == "sbm") {
    Eigen::MatrixXd lambda = doc.has("model", "lambda")
                                 ? doc.get_matrix("model", "lambda")
                                 : default_sweep_lambda();
    int vertices = static_cast<int>(doc.get_int_or("model", "vertices", 300));
    if (doc.has("model", "block_sizes")) {
      SbmSpec sbm{doc.get_int_list("model", "block_sizes"), lambda};
      sbm.validate();
      plan.spec.core = sbm;
    } else {
      plan.spec.core = equal_blocks_sbm(vertices, lambda);
    }
  } else if (type == "rdpg") {
    std::ifstream latent(doc.get("model", "latent_file"));
    if (!latent)
      throw std::runtime_error("cannot open latent_file: " +
                               doc.get("model", "latent_file"));
    RdpgSpec rdpg{load_matrix_csv(latent)};
    rdpg.validate();
    plan.spec.core = rdpg;
  } else {
    throw std::runtime_error("model type must be sbm or rdpg: " + type);
  }
  plan.spec.rho = doc.get_double_or("pair", "rho", 1.0);
  plan.spec.rng_seed = doc.get_u64_or("pair", "rng_seed", 0);
  plan.spec.unshared_g.count =
      static_cast<int>(doc.get_int_or("pair", "unshared_g", 0));
  plan.spec.unshared_g2.count =
      static_cast<int>(doc.get_int_or("pair", "unshared_g2", 0));
  if (doc.has("pair", "unshared_g_blocks"))
    plan.spec.unshared_g.blocks = doc.get_int_list("pair", "unshared_g_blocks");
  if (doc.has("pair", "unshared_g2_blocks"))
    plan.spec.unshared_g2.blocks =
        doc.get_int_list("pair", "unshared_g2_blocks");
  auto load_latent = [&](const std::string& key) -> std::optional<Eigen::MatrixXd> {
    if (!doc.has("pair", key)) return std::nullopt;
    std::ifstream in(doc.get("pair", key));
    if (!in) throw std::runtime_error("cannot open " + key);
    return load_matrix_csv(in);
  };
  plan.spec.unshared_g.latent = load_latent("unshared_g_latent_file");
  plan.spec.unshared_g2.latent = load_latent("unshared_g2_latent_file");
  plan.output_dir = doc.get_or("pair", "output_dir", "out");
  return plan;
}

/// Writes results.csv, aggregate.csv, manifest.json (and nominations/*.json
/// when dumping is on) under `dir`.
inline void write_experiment_outputs(const ExperimentConfig& cfg,
                                     const ExperimentResult& result,
                                     const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_stream_file((fs::path(dir) / "results.csv").string(),
                    [&](std::ostream& out) { write_result_csv(result.rows, out); });
  write_stream_file((fs::path(dir) / "aggregate.csv").string(),
                    [&](std::ostream& out) {
                      write_aggregate_csv(to_string(cfg.kind),
                                          result.aggregates, out);
                    });
  write_text_file((fs::path(dir) / "manifest.json").string(),
                  experiment_manifest_json(cfg).dump(2) + "\n");
  if (cfg.dump_nominations) {
    fs::create_directories(fs::path(dir) / "nominations");
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const ResultRow& row = result.rows[i];
      if (row.nomination_json_text.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(row.nomination_json_text);
      j["truth"] = row.truth_label;
      j["row_index"] = i;
      write_text_file(
          (fs::path(dir) / "nominations" / ("row_" + std::to_string(i) + ".json"))
              .string(),
          j.dump(2) + "\n");
    }
  }
}

}  // namespace vnmatch
