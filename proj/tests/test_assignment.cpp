#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_support.hpp"
#include "vnmatch/assignment.hpp"
#include "vnmatch/rng.hpp"

using namespace vnmatch;

namespace {

Eigen::MatrixXd random_signed_matrix(int k, PhiloxRng& rng, double scale = 10.0) {
  Eigen::MatrixXd m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      m(i, j) = scale * (2.0 * rng.uniform_double() - 1.0);
  return m;
}

}  // namespace

TEST_CASE("diagonal-dominant matrix picks the identity") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m.diagonal().setConstant(5.0);
  auto r = max_assignment(m);
  CHECK(r.permutation == std::vector<int>{0, 1, 2});
  CHECK(r.objective == 15.0);
}

TEST_CASE("1x1 negative entry is forced") {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = -3.0;
  auto r = max_assignment(m);
  CHECK(r.permutation == std::vector<int>{0});
  CHECK(r.objective == -3.0);
}

TEST_CASE("matches exhaustive search on random signed matrices") {
  PhiloxRng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd m = random_signed_matrix(6, rng);
    auto fast = max_assignment(m);
    auto [perm, best] = testsup::brute_force_max_assignment(m);
    CHECK(fast.objective == best);
  }
}

TEST_CASE("optimal for every size up to 7") {
  PhiloxRng rng(7);
  for (int k = 1; k <= 7; ++k) {
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXd m = random_signed_matrix(k, rng, 5.0);
      auto fast = max_assignment(m);
      auto [perm, best] = testsup::brute_force_max_assignment(m);
      CHECK(fast.objective == best);
    }
  }
}

TEST_CASE("shift invariance") {
  PhiloxRng rng(5);
  const int k = 5;
  Eigen::MatrixXd m = random_signed_matrix(k, rng);
  const double c = 3.25;
  auto base = max_assignment(m);
  auto shifted = max_assignment(m + Eigen::MatrixXd::Constant(k, k, c));
  CHECK_THAT(shifted.objective,
             Catch::Matchers::WithinAbs(base.objective + k * c, 1e-9));
  CHECK(shifted.permutation == base.permutation);
}

TEST_CASE("negation gives the minimum-cost assignment") {
  PhiloxRng rng(6);
  Eigen::MatrixXd m = random_signed_matrix(5, rng);
  auto negated = max_assignment(-m);
  auto [perm, best_neg] = testsup::brute_force_max_assignment(-m);
  CHECK(negated.objective == best_neg);
  double min_cost = 0.0;
  for (int i = 0; i < 5; ++i)
    min_cost += m(i, negated.permutation[static_cast<std::size_t>(i)]);
  // no permutation of m costs less
  auto [mperm, max_of_neg] = testsup::brute_force_max_assignment(-m);
  CHECK_THAT(min_cost, Catch::Matchers::WithinAbs(-max_of_neg, 1e-12));
}

TEST_CASE("deterministic on tie-heavy input") {
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(4, 4);
  auto a = max_assignment(ones);
  auto b = max_assignment(ones);
  CHECK(a.permutation == b.permutation);
  CHECK(a.objective == 4.0);
}

TEST_CASE("rejects bad input") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, std::numeric_limits<double>::infinity(), 0.0, 1.0;
  CHECK_THROWS(max_assignment(bad));
  Eigen::MatrixXd nan2(1, 1);
  nan2(0, 0) = std::nan("");
  CHECK_THROWS(max_assignment(nan2));
  CHECK_THROWS(max_assignment(Eigen::MatrixXd(0, 0)));
  CHECK_THROWS(max_assignment(Eigen::MatrixXd::Zero(2, 3)));
}
