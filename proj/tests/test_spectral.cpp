#include "rolenet/spectral.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace rolenet;

namespace {

Eigen::MatrixXd blocks(const std::vector<Index>& sizes, double within, double between, std::mt19937_64* noise = nullptr) {
  Index n = 0;
  for (Index s : sizes) n += s;
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n, n, between);
  Index start = 0;
  for (Index size : sizes) {
    s.block(start, start, size, size).setConstant(within);
    start += size;
  }
  if (noise) {
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) s(j, i) = s(i, j) = s(i, j) + u(*noise);
  }
  s.diagonal().setZero();
  return s;
}

}  // namespace

TEST_CASE("laplacian of a pair") {
  Eigen::MatrixXd s(2, 2);
  s << 0, 1, 1, 0;
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(laplacian(s, LaplacianMode::Unnormalized) == expected);
  CHECK(laplacian(s, LaplacianMode::Normalized).isApprox(expected));
}

TEST_CASE("laplacian properties") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd s = oracle::random_similarity(8, rng);
    s.row(7).setZero();
    s.col(7).setZero();
    const auto l = laplacian(s, LaplacianMode::Unnormalized);
    CHECK(l == l.transpose());
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    const auto ln = laplacian(s, LaplacianMode::Normalized);
    CHECK(ln.isApprox(ln.transpose()));
    CHECK(ln(7, 7) == 1);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ln);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10);
    CHECK(eig.eigenvalues().maxCoeff() < 2 + 1e-10);
  }
}

TEST_CASE("zero eigenvalue multiplicity counts components") {
  const auto s = blocks({3, 4, 2}, 1, 0);
  const auto d = decompose(s, LaplacianMode::Unnormalized);
  CHECK(std::abs(d.eigenvalues(2)) < 1e-9);
  CHECK(d.eigenvalues(3) > 1e-3);
}

TEST_CASE("kmeans separates two blobs and is seed-deterministic") {
  Eigen::MatrixXd pts(6, 2);
  pts << 0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1;
  const auto r = kmeans(pts, 2, 42);
  CHECK(Clustering::from_labels(r.labels).assignment() == std::vector<Index>{0, 0, 0, 1, 1, 1});
  CHECK(r.effective_clusters == 2);
  CHECK(kmeans(pts, 2, 42).labels == r.labels);
  const auto pp = kmeans(pts, 2, 7, 300, 1e-8, KMeansInit::PlusPlus);
  CHECK(Clustering::from_labels(pp.labels).assignment() == std::vector<Index>{0, 0, 0, 1, 1, 1});
  CHECK_THROWS_AS(kmeans(Eigen::MatrixXd::Ones(5, 2), 2, 1), Error);
  CHECK_THROWS_AS(kmeans(pts, 7, 1), Error);
}

TEST_CASE("spectral recovers disconnected blocks in one restart") {
  const auto s = blocks({4, 5}, 1, 0);
  for (auto mode : {LaplacianMode::Normalized, LaplacianMode::Unnormalized}) {
    SpectralConfig cfg;
    cfg.laplacian = mode;
    cfg.restarts = 1;
    const auto r = spectral_cluster(s, cfg);
    CHECK(r.clustering.assignment() == std::vector<Index>{0, 0, 0, 0, 1, 1, 1, 1, 1});
  }
}

TEST_CASE("spectral recovers noisy planted blocks") {
  std::mt19937_64 rng(2);
  const auto s = blocks({4, 4}, 1, 0.1, &rng);
  SpectralConfig cfg;
  cfg.restarts = 20;
  CHECK(spectral_cluster(s, cfg).clustering.assignment() == std::vector<Index>{0, 0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("spectral result does not depend on the thread count") {
  std::mt19937_64 rng(3);
  const auto s = oracle::random_similarity(20, rng);
  SpectralConfig cfg;
  cfg.num_clusters = 4;
  cfg.restarts = 40;
  cfg.seed = 9;
  const auto one = spectral_cluster(s, cfg);
  cfg.threads = 4;
  const auto four = spectral_cluster(s, cfg);
  CHECK(one.clustering == four.clustering);
  CHECK(one.best_restart == four.best_restart);
}

TEST_CASE("spectral preconditions") {
  std::mt19937_64 rng(4);
  const auto s = oracle::random_similarity(5, rng);
  SpectralConfig cfg;
  cfg.num_clusters = 5;
  CHECK_THROWS_AS(spectral_cluster(s, cfg), Error);
  cfg.num_clusters = 1;
  CHECK_THROWS_AS(spectral_cluster(s, cfg), Error);
  cfg.num_clusters = 2;
  cfg.restarts = 0;
  CHECK_THROWS_AS(spectral_cluster(s, cfg), Error);
  cfg.restarts = 5;
  CHECK_THROWS_AS(spectral_cluster(Eigen::MatrixXd::Zero(5, 5), cfg), Error);
}

TEST_CASE("selection kappa pairs with the Laplacian") {
  SpectralConfig cfg;
  CHECK(cfg.selection_kappa() == KappaMode::Volume);
  cfg.laplacian = LaplacianMode::Unnormalized;
  CHECK(cfg.selection_kappa() == KappaMode::Size);
  cfg.kappa = KappaMode::SizeSqMinusSize;
  CHECK(cfg.selection_kappa() == KappaMode::SizeSqMinusSize);
}

TEST_CASE("model selection finds the planted block count") {
  std::mt19937_64 rng(5);
  const auto s = blocks({5, 5, 5}, 1, 0.05, &rng);
  SpectralConfig cfg;
  cfg.restarts = 20;
  const std::vector<Index> range{2, 3, 4, 5, 6};
  const auto sel = select_m_spectral(s, range, cfg, KappaMode::Volume);
  CHECK(sel.best_num_clusters == 3);
  CHECK(sel.curve.size() == 5);
}

TEST_CASE("laplacian names") {
  CHECK(parse_laplacian("normalized") == LaplacianMode::Normalized);
  CHECK(parse_laplacian(to_string(LaplacianMode::Unnormalized)) == LaplacianMode::Unnormalized);
  CHECK_THROWS(parse_laplacian("ratio"));
}
