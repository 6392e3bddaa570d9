#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "test_support.hpp"
#include "vnmatch/nomination.hpp"
#include "vnmatch/random_models.hpp"

using namespace vnmatch;

namespace {

NominationList make_list(const std::vector<std::pair<std::string, double>>& c) {
  NominationList nl;
  nl.candidates = c;
  std::sort(nl.candidates.begin(), nl.candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  nl.candidate_count = static_cast<int>(c.size());
  return nl;
}

VnConfig fast_config(int h, int ell, int restarts, std::uint64_t seed) {
  VnConfig cfg;
  cfg.h = h;
  cfg.ell = ell;
  cfg.soft.restarts = restarts;
  cfg.soft.rng_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("localize_seeds") {
  Graph path({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}});
  SECTION("adjacent seed is kept") {
    SeedMap seeds({{"b", "b2"}, {"d", "d2"}});
    SeedMap local = localize_seeds(path, seeds, "a", 1);
    REQUIRE(local.size() == 1);
    CHECK(local.pairs()[0].first == "b");
  }
  SECTION("isolated voi finds nothing") {
    Graph g({"x", "s", "t"}, {{1, 2}});
    SeedMap seeds({{"s", "s"}});
    CHECK(localize_seeds(g, seeds, "x", 3).empty());
  }
  SECTION("voi must exist and must not be seeded") {
    SeedMap seeds({{"b", "b2"}});
    CHECK_THROWS(localize_seeds(path, seeds, "zz", 1));
    CHECK_THROWS(localize_seeds(path, seeds, "b", 1));
  }
  SECTION("grows with h toward the full seed set") {
    PhiloxRng rng(42);
    CorrelatedPairSpec spec;
    spec.core = equal_blocks_sbm(300, default_sweep_lambda());
    spec.rho = 1.0;
    spec.rng_seed = 8;
    LabeledPair pair = sample_pair(spec);
    std::vector<std::pair<std::string, std::string>> chosen;
    for (int i = 0; i < 25; ++i) {
      if (pair.truth[static_cast<std::size_t>(i * 7)].first == pair.voi_g) continue;
      chosen.push_back(pair.truth[static_cast<std::size_t>(i * 7)]);
    }
    SeedMap seeds(chosen);
    int prev = 0;
    for (int h = 1; h <= 5; ++h) {
      int cur = localize_seeds(pair.g, seeds, pair.voi_g, h).size();
      CHECK(cur >= prev);
      prev = cur;
    }
    CHECK(prev == seeds.size());
  }
}

TEST_CASE("nominate on a perfectly correlated pair") {
  CorrelatedPairSpec spec;
  spec.core = equal_blocks_sbm(20, default_sweep_lambda());
  spec.rho = 1.0;
  spec.rng_seed = 31;
  LabeledPair pair = sample_pair(spec);

  // three seeds within h of the voi
  SeedMap local_probe(
      {std::pair<std::string, std::string>{pair.voi_g, pair.voi_g2}});
  VertexSet near = neighborhood(pair.g, {pair.g.vertex(pair.voi_g)}, 2);
  std::vector<std::pair<std::string, std::string>> chosen;
  for (const auto& [a, b] : pair.truth) {
    if (a == pair.voi_g) continue;
    if (std::binary_search(near.begin(), near.end(), pair.g.vertex(a)))
      chosen.push_back({a, b});
    if (chosen.size() == 3) break;
  }
  REQUIRE(chosen.size() == 3);
  SeedMap seeds(chosen);

  NominationList nl =
      nominate(pair.g, pair.g2, seeds, pair.voi_g, fast_config(2, 2, 20, 5));
  REQUIRE(!nl.stopped);
  CHECK(nl.s_x == 3);
  TauResult tau = evaluate_tau(nl, pair.voi_g2);
  REQUIRE(tau.tau.has_value());
  CHECK(*tau.tau == 0.0);
  CHECK(nl.candidates.front().first == pair.voi_g2);

  SECTION("seeds are never nominated") {
    std::set<std::string> seed_labels;
    for (const auto& [a, b] : seeds.pairs()) seed_labels.insert(b);
    for (const auto& [label, score] : nl.candidates)
      CHECK(seed_labels.count(label) == 0);
    CHECK(nl.candidate_count == nl.gx2_vertices - nl.s_x);
    CHECK(static_cast<int>(nl.candidates.size()) == nl.candidate_count);
  }

  SECTION("scores are sorted, ties in label order") {
    for (std::size_t i = 1; i < nl.candidates.size(); ++i) {
      const auto& prev = nl.candidates[i - 1];
      const auto& cur = nl.candidates[i];
      bool ordered = prev.second > cur.second ||
                     (prev.second == cur.second && prev.first < cur.first);
      CHECK(ordered);
    }
  }
}

TEST_CASE("nominate edge cases") {
  SECTION("missing counterpart leaves truth out of the candidates") {
    CorrelatedPairSpec spec;
    spec.core = equal_blocks_sbm(15, default_sweep_lambda());
    spec.rho = 1.0;
    spec.rng_seed = 77;
    LabeledPair pair = sample_pair(spec);
    // prune x' from the second graph before nominating
    VertexSet keep;
    for (int v = 0; v < pair.g2.vertex_count(); ++v)
      if (pair.g2.label(v) != pair.voi_g2) keep.push_back(v);
    Graph pruned = induced_subgraph(pair.g2, keep);
    std::vector<std::pair<std::string, std::string>> chosen;
    for (const auto& [a, b] : pair.truth)
      if (a != pair.voi_g && chosen.size() < 3) chosen.push_back({a, b});
    NominationList nl = nominate(pair.g, pruned, SeedMap(chosen), pair.voi_g,
                                 fast_config(2, 2, 4, 2));
    TauResult tau = evaluate_tau(nl, pair.voi_g2);
    CHECK(!tau.tau.has_value());
    CHECK(!tau.rank.has_value());
  }
  SECTION("stopped when no seed is local") {
    Graph g({"x", "s", "w"}, {{1, 2}});
    Graph g2({"x2", "s2", "w2"}, {{1, 2}, {0, 1}});
    SeedMap seeds({{"s", "s2"}});
    NominationList nl = nominate(g, g2, seeds, "x", fast_config(1, 1, 2, 0));
    CHECK(nl.stopped);
    CHECK(nl.candidates.empty());
    CHECK(nl.s_x == 0);
    CHECK(!evaluate_tau(nl, "x2").tau.has_value());
  }
  SECTION("single candidate gets the full non-pad row mass") {
    // star in g around the voi; g2 has the seed plus exactly two vertices
    Graph g({"x", "s", "w"}, {{0, 1}, {1, 2}});
    Graph g2({"s2", "y"}, {{0, 1}});
    SeedMap seeds({{"s", "s2"}});
    NominationList nl = nominate(g, g2, seeds, "x", fast_config(1, 1, 3, 4));
    REQUIRE(!nl.stopped);
    CHECK(nl.candidate_count == 1);
    REQUIRE(nl.candidates.size() == 1);
    CHECK(nl.candidates[0].first == "y");
    TauResult tau = evaluate_tau(nl, "y");
    REQUIRE(tau.tau.has_value());
    CHECK(*tau.tau == 0.0);
  }
  SECTION("config validation") {
    Graph g({"a", "b"}, {{0, 1}});
    SeedMap seeds({{"b", "b"}});
    VnConfig bad = fast_config(2, 1, 2, 0);  // ell < h
    CHECK_THROWS(nominate(g, g, seeds, "a", bad));
    VnConfig zero_h = fast_config(0, 2, 2, 0);
    CHECK_THROWS(nominate(g, g, seeds, "a", zero_h));
  }
}

TEST_CASE("evaluate_tau formula") {
  SECTION("truth first with no ties") {
    std::vector<std::pair<std::string, double>> c;
    c.emplace_back("t", 0.9);
    for (int i = 0; i < 9; ++i)
      c.emplace_back("c" + std::to_string(i), 0.5 - 0.01 * i);
    TauResult tau = evaluate_tau(make_list(c), "t");
    REQUIRE(tau.rank.has_value());
    CHECK(*tau.rank == 1.0);
    CHECK(*tau.tau == 0.0);
  }
  SECTION("truth tied with everyone") {
    std::vector<std::pair<std::string, double>> c;
    c.emplace_back("t", 0.2);
    for (int i = 0; i < 10; ++i) c.emplace_back("c" + std::to_string(i), 0.2);
    TauResult tau = evaluate_tau(make_list(c), "t");
    CHECK(*tau.rank == 6.0);
    CHECK(*tau.tau == 0.5);
  }
  SECTION("absent truth is NA") {
    TauResult tau = evaluate_tau(make_list({{"a", 1.0}}), "zz");
    CHECK(!tau.tau.has_value());
  }
  SECTION("single correct candidate scores zero") {
    TauResult tau = evaluate_tau(make_list({{"a", 0.4}}), "a");
    CHECK(*tau.tau == 0.0);
  }
  SECTION("matches the Monte Carlo tie-break oracle") {
    PhiloxRng rng(2025);
    for (int trial = 0; trial < 200; ++trial) {
      int n = 2 + static_cast<int>(rng.next_below(12));
      int denom = 1 + static_cast<int>(rng.next_below(4));
      std::vector<double> scores;
      std::vector<std::pair<std::string, double>> c;
      for (int i = 0; i < n; ++i) {
        double s = static_cast<double>(rng.next_below(
                       static_cast<std::uint64_t>(denom) + 1)) /
                   denom;
        scores.push_back(s);
        c.emplace_back("c" + std::to_string(i), s);
      }
      int truth_idx = static_cast<int>(rng.next_below(n));
      TauResult tau = evaluate_tau(make_list(c), "c" + std::to_string(truth_idx));
      double mc_rank = testsup::mc_expected_rank(scores, truth_idx, 10000, rng);
      double mc_tau = n == 1 ? 0.0 : std::max((mc_rank - 1.0) / (n - 1.0), 0.0);
      REQUIRE(tau.tau.has_value());
      REQUIRE(std::abs(*tau.tau - mc_tau) < 0.01);
    }
  }
  SECTION("raising the truth score never hurts") {
    PhiloxRng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      int n = 3 + static_cast<int>(rng.next_below(8));
      std::vector<std::pair<std::string, double>> c;
      for (int i = 0; i < n; ++i)
        c.emplace_back("c" + std::to_string(i),
                       static_cast<double>(rng.next_below(5)) / 4.0);
      std::string truth = "c0";
      double before = *evaluate_tau(make_list(c), truth).tau;
      c[0].second = std::min(1.0, c[0].second + 0.25);
      double after = *evaluate_tau(make_list(c), truth).tau;
      CHECK(after <= before + 1e-12);
    }
  }
}
