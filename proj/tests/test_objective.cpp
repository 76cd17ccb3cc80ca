#include "rolenet/objective.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace rolenet;

namespace {

Eigen::MatrixXd three_node() {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
  s(0, 1) = s(1, 0) = 2;
  return s;
}

}  // namespace

TEST_CASE("clustering validation and canonical labels") {
  CHECK_THROWS_AS(Clustering({0, 2, 2}, 3), Error);
  CHECK_THROWS_AS(Clustering({0, 3}, 2), Error);
  const std::vector<Index> raw{5, 5, 2, 9, 2};
  const auto c = Clustering::from_labels(raw);
  CHECK(c.assignment() == std::vector<Index>{0, 0, 1, 2, 1});
  CHECK(c.num_clusters() == 3);
  CHECK(c.cluster_sizes() == std::vector<Index>{2, 2, 1});
}

TEST_CASE("hand-computed objectives on three nodes") {
  const Clustering c({0, 0, 1}, 2);
  CHECK(phi_within(three_node(), c, KappaMode::Volume) == 1.0);
  CHECK(phi_between(three_node(), c, KappaMode::Volume) == 0.0);
  CHECK(phi_within(three_node(), c, KappaMode::Size) == 2.0);
  CHECK(phi_within(three_node(), c, KappaMode::SizeSqMinusSize) == 2.0);
}

TEST_CASE("hand-computed objectives on four nodes") {
  Eigen::MatrixXd s(4, 4);
  s << 0, 3, 1, 0,
       3, 0, 0, 2,
       1, 0, 0, 4,
       0, 2, 4, 0;
  const Clustering c({0, 0, 1, 1}, 2);
  // within: 6 and 8; cut: 3 and 3; volume: 9 and 11
  CHECK(phi_within(s, c, KappaMode::Volume) == doctest::Approx(6.0 / 9 + 8.0 / 11));
  CHECK(phi_between(s, c, KappaMode::Volume) == doctest::Approx(3.0 / 9 + 3.0 / 11));
  CHECK(phi_within(s, c, KappaMode::Size) == doctest::Approx(3.0 + 4.0));
  CHECK(phi_between(s, c, KappaMode::SizeSqMinusSize) == doctest::Approx(1.5 + 1.5));
}

TEST_CASE("single cluster") {
  std::mt19937_64 rng(1);
  const auto s = oracle::random_similarity(7, rng);
  const Clustering one(std::vector<Index>(7, 0), 1);
  CHECK(phi_within(s, one, KappaMode::Volume) == doctest::Approx(1.0));
  CHECK(phi_between(s, one, KappaMode::Volume) == 0.0);
}

TEST_CASE("volume duality on random instances") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_similarity(10, rng);
    const Index m = 1 + trial % 5;
    const auto c = oracle::random_clustering(10, m, rng);
    CHECK(phi_within(s, c, KappaMode::Volume) + phi_between(s, c, KappaMode::Volume) ==
          doctest::Approx(static_cast<double>(m)).epsilon(1e-12));
  }
}

TEST_CASE("objective is invariant to relabeling clusters") {
  std::mt19937_64 rng(3);
  const auto s = oracle::random_similarity(9, rng);
  const auto c = oracle::random_clustering(9, 3, rng);
  std::vector<Index> swapped = c.assignment();
  for (auto& v : swapped) v = 2 - v;
  const Clustering d(swapped, 3);
  for (auto kappa : {KappaMode::Size, KappaMode::Volume, KappaMode::SizeSqMinusSize})
    CHECK(phi_within(s, c, kappa) == doctest::Approx(phi_within(s, d, kappa)));
}

TEST_CASE("brute force beats every sampled partition") {
  std::mt19937_64 rng(4);
  const auto s = oracle::random_similarity(8, rng);
  const auto best = brute_force_best(s, 3, KappaMode::Volume);
  const double value = phi_within(s, best, KappaMode::Volume);
  CHECK(best.num_clusters() == 3);
  for (int trial = 0; trial < 200; ++trial)
    CHECK(phi_within(s, oracle::random_clustering(8, 3, rng), KappaMode::Volume) <= value + 1e-12);
  CHECK_THROWS_AS(brute_force_best(oracle::random_similarity(13, rng), 2, KappaMode::Volume), Error);
  CHECK_THROWS_AS(brute_force_best(s, 5, KappaMode::Volume), Error);
}

TEST_CASE("brute force finds planted blocks") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(6, 6, 0.1);
  s.topLeftCorner(3, 3).setConstant(1);
  s.bottomRightCorner(3, 3).setConstant(1);
  s.diagonal().setZero();
  CHECK(brute_force_best(s, 2, KappaMode::Volume).assignment() == std::vector<Index>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("select_m picks the best M with ties to the smaller") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(6, 6, 0.1);
  s.topLeftCorner(3, 3).setConstant(1);
  s.bottomRightCorner(3, 3).setConstant(1);
  s.diagonal().setZero();
  auto solver = [&](Index m) { return brute_force_best(s, m, KappaMode::Volume); };
  const std::vector<Index> range{4, 2, 3, 3};
  const auto sel = select_m(s, range, solver, KappaMode::Volume);
  CHECK(sel.best_num_clusters == 2);
  REQUIRE(sel.curve.size() == 3);
  CHECK(sel.curve[0].num_clusters == 2);
  CHECK(sel.curve[0].clustering == sel.best);
  CHECK_FALSE(sel.degenerate);

  const std::vector<Index> only{2};
  CHECK(select_m(s, only, solver, KappaMode::Volume).best_num_clusters == 2);

  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(5, 5);
  const std::vector<Index> many{2, 3};
  auto zero_solver = [&](Index m) { return brute_force_best(zero, m, KappaMode::Volume); };
  const auto flat = select_m(zero, many, zero_solver, KappaMode::Volume);
  CHECK(flat.degenerate);
  CHECK(flat.best_num_clusters == 2);

  const std::vector<Index> too_big{6};
  CHECK_THROWS_AS(select_m(s, too_big, solver, KappaMode::Volume), Error);
  auto failing = [](Index) -> Clustering { throw Error("boom"); };
  CHECK_THROWS_WITH(select_m(s, only, failing, KappaMode::Volume), doctest::Contains("M = 2"));
}

TEST_CASE("kappa names") {
  for (auto kappa : {KappaMode::Size, KappaMode::Volume, KappaMode::SizeSqMinusSize})
    CHECK(parse_kappa(to_string(kappa)) == kappa);
  CHECK_THROWS(parse_kappa("mass"));
}
