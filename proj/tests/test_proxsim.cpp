#include "rolenet/proxsim.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace rolenet;

TEST_CASE("L1 distance of the chain embedding") {
  Eigen::MatrixXd phi(2, 2);
  phi << 1, 1, 1, 0;
  CHECK(l1_distances(phi)(0, 1) == 1);
  CHECK(l1_distances(Eigen::MatrixXd::Ones(3, 4)).isZero());
}

TEST_CASE("L1 distances match a double loop") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(5, 8);
  for (Index i = 0; i < x.size(); ++i) x(i) = g(rng);
  const auto d = l1_distances(x);
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) {
      double sum = 0;
      for (Index f = 0; f < 5; ++f) sum += std::abs(x(f, i) - x(f, j));
      CHECK(d(i, j) == doctest::Approx(sum).epsilon(1e-15));
    }
  CHECK(d == d.transpose());
  CHECK(d.diagonal().isZero());
}

TEST_CASE("L1 rejects bad embeddings") {
  CHECK_THROWS_AS(l1_distances(Eigen::MatrixXd(0, 3)), Error);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(l1_distances(bad), Error);
}

TEST_CASE("similarity is D_max minus D") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 4, 10, 4, 0, 7, 10, 7, 0;
  const auto s = to_similarity(d);
  CHECK(s.values(0, 1) == 6);
  CHECK(s.values(0, 2) == 0);
  CHECK(s.values(1, 2) == 3);
  CHECK(s.values.diagonal().isZero());
  CHECK(s.degrees == Eigen::Vector3d(6, 9, 3));
  CHECK_FALSE(s.degenerate);

  const auto flat = to_similarity(l1_distances(Eigen::MatrixXd::Ones(2, 5)));
  CHECK(flat.values.isZero());
  CHECK(flat.degenerate);
}

TEST_CASE("similarity properties on random embeddings") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd x(4, 9);
    for (Index i = 0; i < x.size(); ++i) x(i) = u(rng);
    const auto s = to_similarity(l1_distances(x)).values;
    CHECK(s == s.transpose());
    CHECK((s.array() >= 0).all());
    CHECK(s.diagonal().isZero());
  }
}

TEST_CASE("symmetrize modes") {
  Eigen::MatrixXd p(2, 2);
  p << 0, 2, 4, 0;
  CHECK(symmetrize(p, SymmetrizeMode::Average).values(0, 1) == 3);
  CHECK(symmetrize(p, SymmetrizeMode::Min).values(1, 0) == 2);
  CHECK(symmetrize(p, SymmetrizeMode::Max).values(0, 1) == 4);

  std::mt19937_64 rng(3);
  const Eigen::MatrixXd sym = oracle::random_similarity(6, rng);
  for (auto mode : {SymmetrizeMode::Average, SymmetrizeMode::Min, SymmetrizeMode::Max})
    CHECK(symmetrize(sym, mode).values == sym);

  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd r(6, 6);
  for (Index i = 0; i < r.size(); ++i) r(i) = u(rng);
  const auto avg = symmetrize(r, SymmetrizeMode::Average).values;
  const auto lo = symmetrize(r, SymmetrizeMode::Min).values;
  const auto hi = symmetrize(r, SymmetrizeMode::Max).values;
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) {
      CHECK(avg(i, j) == (r(i, j) + r(j, i)) / 2);
      CHECK(lo(i, j) == (r(i, j) < r(j, i) ? r(i, j) : r(j, i)));
      CHECK(hi(i, j) == (r(i, j) > r(j, i) ? r(i, j) : r(j, i)));
    }
}

TEST_CASE("matrix CSV and binary round-trip") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd s = oracle::random_similarity(5, rng);
  const std::vector<std::string> labels{"a", "b", "c,d", "e", "f"};
  std::stringstream csv_io;
  write_matrix_csv(csv_io, s, labels);
  std::vector<std::string> back_labels;
  CHECK(read_matrix_csv(csv_io, back_labels) == s);
  CHECK(back_labels == labels);

  std::stringstream bin_io;
  write_matrix_binary(bin_io, s);
  CHECK(read_matrix_binary(bin_io) == s);

  const auto dir = std::filesystem::temp_directory_path() / "rolenet_proxsim_test";
  std::filesystem::create_directories(dir);
  write_matrix_file(dir / "s.bin", s, labels);
  std::vector<std::string> index_labels;
  CHECK(read_matrix_file(dir / "s.bin", index_labels) == s);
  CHECK(index_labels.front() == "0");
  std::filesystem::remove_all(dir);

  std::stringstream truncated("\x05\x00\x00\x00\x00\x00\x00\x00");
  CHECK_THROWS(read_matrix_binary(truncated));
}
