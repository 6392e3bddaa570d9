// Command-line front end: generate correlated graph pairs, run soft seeded
// matching or vertex nomination on edge-list files, and drive the Monte
// Carlo experiment sweeps.
//
// Exit codes: 0 success, 2 nomination stopped (no seeds within h of the
// VOI), 1 any error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "vnmatch/vnmatch.hpp"

namespace {

constexpr int kExitStop = 2;

struct SoftFlags {
  int restarts = 100;
  double gamma = 0.1;
  double eps = 1e-6;
  int max_iter = 100;
  std::uint64_t rng_seed = 0;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--restarts,-R", restarts, "random restarts")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--gamma", gamma, "random start spread in [0,1]");
    cmd->add_option("--eps", eps, "relative objective-change tolerance");
    cmd->add_option("--max-iter", max_iter, "iteration cap per restart")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rng-seed", rng_seed, "random seed");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }

  vnmatch::SoftSgmConfig config() const {
    vnmatch::SoftSgmConfig cfg;
    cfg.restarts = restarts;
    cfg.gamma = gamma;
    cfg.eps = eps;
    cfg.max_iter = max_iter;
    cfg.rng_seed = rng_seed;
    cfg.threads = threads;
    return cfg;
  }
};

vnmatch::Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  auto data = vnmatch::load_edge_list(in);
  if (data.loops_dropped > 0 || data.duplicates_collapsed > 0)
    std::cerr << path << ": dropped " << data.loops_dropped
              << " self-loop(s), collapsed " << data.duplicates_collapsed
              << " duplicate edge(s)\n";
  return std::move(data.graph);
}

vnmatch::SeedMap load_seed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open seed file: " + path);
  return vnmatch::load_seed_map(in);
}

vnmatch::IniDoc load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return vnmatch::IniDoc::parse(in);
}

void print_generate_summary(const vnmatch::CorrelatedPairSpec& spec,
                            const vnmatch::LabeledPair& pair) {
  auto density = [](const vnmatch::Graph& g) {
    double n = g.vertex_count();
    return n < 2 ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1));
  };
  std::cout << "g:  " << pair.g.vertex_count() << " vertices, "
            << pair.g.edge_count() << " edges, density " << density(pair.g)
            << "\n";
  std::cout << "g2: " << pair.g2.vertex_count() << " vertices, "
            << pair.g2.edge_count() << " edges, density " << density(pair.g2)
            << "\n";
  std::cout << "shared: " << pair.truth.size() << ", voi: " << pair.voi_g
            << " <-> " << pair.voi_g2 << "\n";

  if (!std::holds_alternative<vnmatch::SbmSpec>(spec.core)) return;
  const auto& sbm = std::get<vnmatch::SbmSpec>(spec.core);
  const int k = sbm.block_count();
  Eigen::MatrixXd hits = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd slots = Eigen::MatrixXd::Zero(k, k);
  const int core_n = sbm.vertex_count();
  for (int i = 0; i < core_n; ++i) {
    int u = pair.g.vertex("a" + std::to_string(i));
    for (int j = i + 1; j < core_n; ++j) {
      int v = pair.g.vertex("a" + std::to_string(j));
      int bi = sbm.block_of(i), bj = sbm.block_of(j);
      slots(bi, bj) += 1;
      slots(bj, bi) = slots(bi, bj);
      if (pair.g.has_edge(u, v)) {
        hits(bi, bj) += 1;
        hits(bj, bi) = hits(bi, bj);
      }
    }
  }
  std::cout << "core block densities of g (target lambda):\n";
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      double d = slots(a, b) > 0 ? hits(a, b) / slots(a, b) : 0.0;
      std::cout << "  " << d << " (" << sbm.lambda(a, b) << ")";
    }
    std::cout << "\n";
  }
}

int cmd_generate(const std::string& config_path,
                 const std::string& out_override) {
  vnmatch::GeneratePlan plan =
      vnmatch::parse_generate_config(load_config(config_path));
  if (!out_override.empty()) plan.output_dir = out_override;
  vnmatch::LabeledPair pair = vnmatch::sample_pair(plan.spec);
  vnmatch::write_pair_outputs(plan.spec, pair, plan.output_dir);
  print_generate_summary(plan.spec, pair);
  std::cout << "wrote g.edges, g2.edges, truth.csv, manifest.json to "
            << plan.output_dir << "\n";
  return 0;
}

int cmd_match(const std::string& g_path, const std::string& g2_path,
              const std::string& seed_path, const SoftFlags& flags,
              const std::string& out_path) {
  vnmatch::Graph g = load_graph_file(g_path);
  vnmatch::Graph g2 = load_graph_file(g2_path);
  vnmatch::SeedMap seeds = load_seed_file(seed_path);
  vnmatch::SoftMatch match = vnmatch::soft_sgm(g, g2, seeds, flags.config());
  std::string text = vnmatch::soft_match_json(match).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    vnmatch::write_text_file(out_path, text);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_nominate(const std::string& g_path, const std::string& g2_path,
                 const std::string& seed_path, const std::string& voi,
                 int h, int ell, const SoftFlags& flags,
                 const std::string& truth_path, const std::string& out_prefix) {
  vnmatch::Graph g = load_graph_file(g_path);
  vnmatch::Graph g2 = load_graph_file(g2_path);
  vnmatch::SeedMap seeds = load_seed_file(seed_path);

  vnmatch::VnConfig cfg;
  cfg.h = h;
  cfg.ell = ell;
  cfg.soft = flags.config();
  vnmatch::NominationList nl = vnmatch::nominate(g, g2, seeds, voi, cfg);

  std::optional<vnmatch::TauResult> tau;
  std::string truth_label;
  if (!truth_path.empty()) {
    std::ifstream in(truth_path);
    if (!in) throw std::runtime_error("cannot open truth file: " + truth_path);
    auto truth = vnmatch::load_truth_csv(in);
    for (const auto& [a, b] : truth)
      if (a == voi) truth_label = b;
    tau = vnmatch::evaluate_tau(nl, truth_label);
  }

  nlohmann::json j = vnmatch::nomination_json(nl);
  if (tau) {
    j["truth"] = truth_label;
    j["tau"] = tau->tau ? nlohmann::json(*tau->tau) : nlohmann::json();
    j["rank"] = tau->rank ? nlohmann::json(*tau->rank) : nlohmann::json();
  }

  if (!out_prefix.empty()) {
    vnmatch::write_stream_file(out_prefix + ".csv", [&](std::ostream& out) {
      vnmatch::write_nomination_csv(nl, out);
    });
    vnmatch::write_text_file(out_prefix + ".json", j.dump(2) + "\n");
    std::cout << "wrote " << out_prefix << ".csv and " << out_prefix
              << ".json\n";
  } else {
    std::ostringstream csv;
    vnmatch::write_nomination_csv(nl, csv);
    std::cout << csv.str();
  }

  if (nl.stopped) {
    std::cerr << "no seeds within " << h << " hop(s) of " << voi
              << "; stopping\n";
    return kExitStop;
  }
  if (tau) {
    std::cout << "tau="
              << (tau->tau ? vnmatch::detail::fmt_double(*tau->tau) : "NA")
              << " rank="
              << (tau->rank ? vnmatch::detail::fmt_double(*tau->rank) : "NA")
              << " candidates=" << tau->candidate_count << "\n";
  }
  return 0;
}

int cmd_experiment(vnmatch::ExperimentKind kind, const std::string& config_path,
                   const std::string& out_override) {
  vnmatch::ExperimentConfig cfg =
      vnmatch::ExperimentConfig::from_ini(load_config(config_path), kind);
  if (!out_override.empty()) cfg.output_dir = out_override;
  vnmatch::ExperimentResult result = vnmatch::run_experiment(cfg);
  vnmatch::write_experiment_outputs(cfg, result, cfg.output_dir);
  std::cout << "wrote " << result.rows.size() << " result rows and "
            << result.aggregates.size() << " aggregate rows to "
            << cfg.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeded graph matching and local vertex nomination toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand(
      "generate", "sample a correlated graph pair and write it to disk");
  std::string gen_config, gen_out;
  gen->add_option("--config", gen_config, "pair config file")
      ->required()
      ->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "output directory (overrides config)");

  // match
  auto* match = app.add_subcommand(
      "match", "soft seeded matching of two edge-list graphs");
  std::string m_g, m_g2, m_seeds, m_out;
  SoftFlags m_flags;
  match->add_option("--g", m_g, "first graph edge list")->required();
  match->add_option("--g2", m_g2, "second graph edge list")->required();
  match->add_option("--seeds", m_seeds, "seed pair file")->required();
  match->add_option("--out", m_out, "output JSON path (default: stdout)");
  m_flags.attach(match);

  // nominate
  auto* nom = app.add_subcommand(
      "nominate", "rank likely counterparts of a vertex of interest");
  std::string n_g, n_g2, n_seeds, n_voi, n_truth, n_out;
  int n_h = 2, n_ell = 0;
  SoftFlags n_flags;
  nom->add_option("--g", n_g, "first graph edge list")->required();
  nom->add_option("--g2", n_g2, "second graph edge list")->required();
  nom->add_option("--seeds", n_seeds, "seed pair file")->required();
  nom->add_option("--voi", n_voi, "vertex of interest label in the first graph")
      ->required();
  nom->add_option("--h", n_h, "max seed distance from the voi (default 2)");
  nom->add_option("--ell", n_ell,
                  "neighborhood radius around localized seeds (default: h)");
  nom->add_option("--truth", n_truth, "truth CSV for tau evaluation");
  nom->add_option("--out", n_out, "output path prefix (.csv/.json)");
  n_flags.attach(nom);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Monte Carlo sweeps");
  exp->require_subcommand(1);
  std::string e_config, e_out;
  auto* seed_sweep = exp->add_subcommand(
      "seed-sweep", "tau versus localized seed count over a rho grid");
  auto* ratio_sweep = exp->add_subcommand(
      "ratio-sweep", "tau versus graph size ratio at fixed seed count");
  auto* nbhd = exp->add_subcommand(
      "neighborhood", "localized seed count versus hop radius");
  for (auto* sub : {seed_sweep, ratio_sweep, nbhd}) {
    sub->add_option("--config", e_config, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", e_out, "output directory (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_config, gen_out);
    if (match->parsed()) return cmd_match(m_g, m_g2, m_seeds, m_flags, m_out);
    if (nom->parsed())
      return cmd_nominate(n_g, n_g2, n_seeds, n_voi, n_h,
                          n_ell > 0 ? n_ell : n_h, n_flags, n_truth, n_out);
    if (seed_sweep->parsed())
      return cmd_experiment(vnmatch::ExperimentKind::SeedSweep, e_config, e_out);
    if (ratio_sweep->parsed())
      return cmd_experiment(vnmatch::ExperimentKind::RatioSweep, e_config, e_out);
    if (nbhd->parsed())
      return cmd_experiment(vnmatch::ExperimentKind::NeighborhoodStudy,
                            e_config, e_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
