#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vnmatch/nomination.hpp"
#include "vnmatch/random_models.hpp"
#include "vnmatch/soft_sgm.hpp"

namespace vnmatch {

inline nlohmann::json soft_config_json(const SoftSgmConfig& cfg) {
  return {{"restarts", cfg.restarts},
          {"gamma", cfg.gamma},
          {"eps", cfg.eps},
          {"max_iter", cfg.max_iter},
          {"rng_seed", cfg.rng_seed}};
}

inline nlohmann::json soft_match_json(const SoftMatch& m) {
  nlohmann::json j;
  j["config"] = soft_config_json(m.config);
  j["row_labels"] = m.row_labels;
  j["col_labels"] = m.col_labels;
  j["real_rows"] = m.real_rows;
  j["real_cols"] = m.real_cols;
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& [a, b] : m.seed_pairs) seeds.push_back({a, b});
  j["seeds"] = seeds;
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.p.size()));
  for (int r = 0; r < m.p.rows(); ++r)
    for (int c = 0; c < m.p.cols(); ++c) flat.push_back(m.p(r, c));
  j["p_row_major"] = flat;
  std::vector<double> pad_mass;
  for (int r = 0; r < m.real_rows; ++r) {
    double mass = 0.0;
    for (int c = m.real_cols; c < m.p.cols(); ++c) mass += m.p(r, c);
    pad_mass.push_back(mass);
  }
  j["pad_mass"] = pad_mass;
  return j;
}

inline nlohmann::json nomination_json(const NominationList& nl) {
  nlohmann::json j;
  j["voi"] = nl.voi_label;
  j["stopped"] = nl.stopped;
  j["s_x"] = nl.s_x;
  j["gx_vertices"] = nl.gx_vertices;
  j["gx2_vertices"] = nl.gx2_vertices;
  j["candidate_count"] = nl.candidate_count;
  j["pad_mass"] = nl.pad_mass;
  j["h"] = nl.config.h;
  j["ell"] = nl.config.ell;
  j["soft"] = soft_config_json(nl.config.soft);
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& [label, score] : nl.candidates)
    cands.push_back({{"label", label}, {"score", score}});
  j["candidates"] = cands;
  return j;
}

inline NominationList nomination_from_json(const nlohmann::json& j) {
  NominationList nl;
  nl.voi_label = j.at("voi").get<std::string>();
  nl.stopped = j.at("stopped").get<bool>();
  nl.s_x = j.at("s_x").get<int>();
  nl.gx_vertices = j.at("gx_vertices").get<int>();
  nl.gx2_vertices = j.at("gx2_vertices").get<int>();
  nl.candidate_count = j.at("candidate_count").get<int>();
  nl.pad_mass = j.at("pad_mass").get<double>();
  nl.config.h = j.at("h").get<int>();
  nl.config.ell = j.at("ell").get<int>();
  for (const auto& c : j.at("candidates"))
    nl.candidates.emplace_back(c.at("label").get<std::string>(),
                               c.at("score").get<double>());
  return nl;
}

inline void write_nomination_csv(const NominationList& nl, std::ostream& out) {
  out << "rank,label,score\n";
  int rank = 1;
  for (const auto& [label, score] : nl.candidates)
    out << rank++ << ',' << label << ',' << score << '\n';
}

/// Truth CSV: header line then one `label_g,label_g2` row per shared vertex.
inline void write_truth_csv(
    const std::vector<std::pair<std::string, std::string>>& truth,
    std::ostream& out) {
  out << "label_g,label_g2\n";
  for (const auto& [a, b] : truth) out << a << ',' << b << '\n';
}

inline std::vector<std::pair<std::string, std::string>> load_truth_csv(
    std::istream& in) {
  std::vector<std::pair<std::string, std::string>> truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line == "label_g,label_g2") continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("truth file line " + std::to_string(line_no) +
                               ": expected two comma-separated labels");
    truth.emplace_back(line.substr(0, comma), line.substr(comma + 1));
  }
  return truth;
}

/// Numeric matrix from CSV/whitespace rows (used for RDPG latent positions).
inline Eigen::MatrixXd load_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string normalized = line;
    for (auto& ch : normalized)
      if (ch == ',') ch = ' ';
    std::istringstream iss(normalized);
    std::vector<double> entries;
    double v;
    while (iss >> v) entries.push_back(v);
    if (!iss.eof())
      throw std::runtime_error("matrix line " + std::to_string(line_no) +
                               ": malformed number");
    if (entries.empty()) continue;
    if (!rows.empty() && entries.size() != rows[0].size())
      throw std::runtime_error("matrix line " + std::to_string(line_no) +
                               ": ragged row");
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw std::runtime_error("matrix input is empty");
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  return m;
}

inline nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json pair_manifest_json(const CorrelatedPairSpec& spec,
                                         const LabeledPair& pair) {
  nlohmann::json j;
  j["rho"] = spec.rho;
  j["rng_seed"] = spec.rng_seed;
  if (std::holds_alternative<SbmSpec>(spec.core)) {
    const auto& sbm = std::get<SbmSpec>(spec.core);
    j["model"] = "sbm";
    j["block_sizes"] = sbm.block_sizes;
    j["lambda"] = matrix_json(sbm.lambda);
  } else {
    const auto& rdpg = std::get<RdpgSpec>(spec.core);
    j["model"] = "rdpg";
    j["latent"] = matrix_json(rdpg.latent);
  }
  j["unshared_g"] = spec.unshared_g.count;
  j["unshared_g2"] = spec.unshared_g2.count;
  j["voi_g"] = pair.voi_g;
  j["voi_g2"] = pair.voi_g2;
  j["g_vertices"] = pair.g.vertex_count();
  j["g2_vertices"] = pair.g2.vertex_count();
  j["g_edges"] = pair.g.edge_count();
  j["g2_edges"] = pair.g2.edge_count();
  return j;
}

/// Writes g.edges, g2.edges, truth.csv, manifest.json under `dir`.
inline void write_pair_outputs(const CorrelatedPairSpec& spec,
                               const LabeledPair& pair, const std::string& dir);

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

template <typename Fn>
inline void write_stream_file(const std::string& path, Fn&& fn) {
  std::ostringstream buffer;
  fn(buffer);
  write_text_file(path, buffer.str());
}

inline void write_pair_outputs(const CorrelatedPairSpec& spec,
                               const LabeledPair& pair,
                               const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_stream_file((fs::path(dir) / "g.edges").string(),
                    [&](std::ostream& out) { save_edge_list(pair.g, out); });
  write_stream_file((fs::path(dir) / "g2.edges").string(),
                    [&](std::ostream& out) { save_edge_list(pair.g2, out); });
  write_stream_file((fs::path(dir) / "truth.csv").string(),
                    [&](std::ostream& out) { write_truth_csv(pair.truth, out); });
  write_text_file((fs::path(dir) / "manifest.json").string(),
                  pair_manifest_json(spec, pair).dump(2) + "\n");
}

}  // namespace vnmatch
