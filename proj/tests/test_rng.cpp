#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "vnmatch/rng.hpp"

using vnmatch::PhiloxRng;

TEST_CASE("philox known-answer vectors") {
  auto zero = PhiloxRng::block({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  auto ones = PhiloxRng::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  auto pi = PhiloxRng::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             {0xa4093822u, 0x299f31d0u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("streams are deterministic and distinct") {
  PhiloxRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool same = true, differs_stream = false, differs_seed = false;
  for (int i = 0; i < 64; ++i) {
    auto x = a.next_u32();
    same = same && (x == b.next_u32());
    differs_stream = differs_stream || (x != c.next_u32());
    differs_seed = differs_seed || (x != d.next_u32());
  }
  CHECK(same);
  CHECK(differs_stream);
  CHECK(differs_seed);
}

TEST_CASE("substream matches direct construction") {
  PhiloxRng base(1234, 0);
  PhiloxRng sub = base.substream(7);
  PhiloxRng direct(1234, 7);
  for (int i = 0; i < 16; ++i) CHECK(sub.next_u64() == direct.next_u64());
}

TEST_CASE("uniform doubles live in [0,1) with mean near 1/2") {
  PhiloxRng rng(5);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK_THAT(sum / n, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("next_below is bounded and roughly uniform") {
  PhiloxRng rng(9);
  const std::uint64_t n = 7;
  std::vector<int> counts(n, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    auto x = rng.next_below(n);
    REQUIRE(x < n);
    ++counts[static_cast<std::size_t>(x)];
  }
  // each bucket expects 10000, sd ~ 96
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  CHECK_THROWS(rng.next_below(0));
}

TEST_CASE("shuffle produces uniform permutations") {
  PhiloxRng rng(11);
  std::map<std::vector<int>, int> counts;
  const int draws = 6000;
  for (int i = 0; i < draws; ++i) {
    std::vector<int> v{0, 1, 2};
    rng.shuffle(v);
    ++counts[v];
  }
  REQUIRE(counts.size() == 6);
  for (const auto& [perm, c] : counts) CHECK(std::abs(c - 1000) < 160);
}

TEST_CASE("random_permutation is a permutation") {
  PhiloxRng rng(13);
  auto p = rng.random_permutation(50);
  std::vector<bool> seen(50, false);
  for (int x : p) {
    REQUIRE(x >= 0);
    REQUIRE(x < 50);
    REQUIRE(!seen[static_cast<std::size_t>(x)]);
    seen[static_cast<std::size_t>(x)] = true;
  }
}

TEST_CASE("derive_seed is stable and sensitive to index and tag") {
  CHECK(vnmatch::derive_seed(1, 2, 3) == vnmatch::derive_seed(1, 2, 3));
  CHECK(vnmatch::derive_seed(1, 2, 3) != vnmatch::derive_seed(1, 3, 3));
  CHECK(vnmatch::derive_seed(1, 2, 3) != vnmatch::derive_seed(1, 2, 4));
  CHECK(vnmatch::derive_seed(1, 2, 3) != vnmatch::derive_seed(2, 2, 3));
}
