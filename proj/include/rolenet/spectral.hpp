#pragma once

#include "rolenet/objective.hpp"
#include "rolenet/parallel.hpp"
#include "rolenet/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rolenet {

enum class LaplacianMode { Unnormalized, Normalized };

std::string to_string(LaplacianMode mode);
LaplacianMode parse_laplacian(const std::string& name);

/// Unnormalized: L = D - S. Normalized: I - D^{-1/2} S D^{-1/2}, where
/// isolated nodes (zero degree) get a zero row and column in D^{-1/2}.
template <typename Derived>
Matrix<typename Derived::Scalar> laplacian(const Eigen::MatrixBase<Derived>& similarity,
                                           LaplacianMode mode) {
  using Scalar = typename Derived::Scalar;
  if (similarity.rows() != similarity.cols()) throw Error("similarity matrix must be square");
  const Index n = similarity.rows();
  const Vector<Scalar> degrees = similarity.rowwise().sum();
  if (mode == LaplacianMode::Unnormalized) {
    Matrix<Scalar> l = -similarity;
    l.diagonal() += degrees;
    return l;
  }
  Vector<Scalar> inv_sqrt(n);
  for (Index i = 0; i < n; ++i)
    inv_sqrt(i) = degrees(i) > Scalar(0) ? Scalar(1) / std::sqrt(degrees(i)) : Scalar(0);
  Matrix<Scalar> l = -(inv_sqrt.asDiagonal() * similarity * inv_sqrt.asDiagonal());
  l.diagonal().array() += Scalar(1);
  return l;
}

enum class KMeansInit { Uniform, PlusPlus };

template <typename Scalar>
struct KMeansResult {
  std::vector<Index> labels;
  Matrix<Scalar> centroids;
  int iterations = 0;
  /// Number of nonempty clusters in the final assignment.
  Index effective_clusters = 0;
};

namespace detail {

/// Indices of pairwise-distinct rows (first occurrence, in lexicographic row order).
template <typename Derived>
std::vector<Index> distinct_rows(const Eigen::MatrixBase<Derived>& points) {
  std::vector<Index> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  auto less = [&](Index a, Index b) {
    for (Index c = 0; c < points.cols(); ++c) {
      if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<Index> distinct;
  for (Index idx : order) {
    if (distinct.empty() || points.row(distinct.back()) != points.row(idx)) distinct.push_back(idx);
  }
  return distinct;
}

}  // namespace detail

/// Lloyd's algorithm on the rows of `points`. Initial centroids are
/// `num_clusters` distinct points drawn with the given seed. A cluster that
/// runs empty is reseeded at the point farthest from its own centroid. Stops
/// when no centroid moves by `tol` or more, or after `max_iter` iterations.
template <typename Derived>
KMeansResult<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& points,
                                              Index num_clusters, std::uint64_t seed,
                                              int max_iter = 300, double tol = 1e-8,
                                              KMeansInit init = KMeansInit::Uniform) {
  using Scalar = typename Derived::Scalar;
  const Index n = points.rows();
  const Index dim = points.cols();
  if (num_clusters < 1) throw Error("k-means needs at least one cluster");
  if (num_clusters > n) throw Error("k-means: more clusters than points");
  if (max_iter < 1) throw Error("k-means: max_iter must be >= 1");
  if (!(tol > 0.0)) throw Error("k-means: tolerance must be positive");

  auto distinct = detail::distinct_rows(points);
  if (static_cast<Index>(distinct.size()) < num_clusters)
    throw Error("k-means: only " + std::to_string(distinct.size()) + " distinct points for " +
                std::to_string(num_clusters) + " clusters");

  std::mt19937_64 rng(seed);
  Matrix<Scalar> centroids(num_clusters, dim);
  if (init == KMeansInit::Uniform) {
    for (Index c = 0; c < num_clusters; ++c) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(c), distinct.size() - 1);
      std::swap(distinct[static_cast<std::size_t>(c)], distinct[pick(rng)]);
      centroids.row(c) = points.row(distinct[static_cast<std::size_t>(c)]);
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, distinct.size() - 1);
    centroids.row(0) = points.row(distinct[pick(rng)]);
    std::vector<double> weight(static_cast<std::size_t>(n));
    for (Index c = 1; c < num_clusters; ++c) {
      for (Index i = 0; i < n; ++i) {
        Scalar best = std::numeric_limits<Scalar>::max();
        for (Index k = 0; k < c; ++k) best = std::min(best, (points.row(i) - centroids.row(k)).squaredNorm());
        weight[static_cast<std::size_t>(i)] = static_cast<double>(best);
      }
      std::discrete_distribution<std::size_t> draw(weight.begin(), weight.end());
      centroids.row(c) = points.row(static_cast<Index>(draw(rng)));
    }
  }

  KMeansResult<Scalar> result;
  result.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<Index> counts(static_cast<std::size_t>(num_clusters));
  for (int iter = 1; iter <= max_iter; ++iter) {
    result.iterations = iter;
    std::fill(counts.begin(), counts.end(), 0);
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      Scalar best_distance = std::numeric_limits<Scalar>::max();
      for (Index c = 0; c < num_clusters; ++c) {
        const Scalar d = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_distance) {
          best_distance = d;
          best = c;
        }
      }
      result.labels[static_cast<std::size_t>(i)] = best;
      ++counts[static_cast<std::size_t>(best)];
    }
    for (Index c = 0; c < num_clusters; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index farthest = -1;
      Scalar farthest_distance = -1;
      for (Index i = 0; i < n; ++i) {
        const Index owner = result.labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(owner)] < 2) continue;
        const Scalar d = (points.row(i) - centroids.row(owner)).squaredNorm();
        if (d > farthest_distance) {
          farthest_distance = d;
          farthest = i;
        }
      }
      if (farthest < 0) break;
      --counts[static_cast<std::size_t>(result.labels[static_cast<std::size_t>(farthest)])];
      result.labels[static_cast<std::size_t>(farthest)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      centroids.row(c) = points.row(farthest);
    }

    Matrix<Scalar> updated = Matrix<Scalar>::Zero(num_clusters, dim);
    for (Index i = 0; i < n; ++i) updated.row(result.labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (Index c = 0; c < num_clusters; ++c) {
      const auto count = counts[static_cast<std::size_t>(c)];
      if (count > 0) {
        updated.row(c) /= static_cast<Scalar>(count);
      } else {
        updated.row(c) = centroids.row(c);
      }
    }
    Scalar shift = 0;
    for (Index c = 0; c < num_clusters; ++c) shift = std::max(shift, (updated.row(c) - centroids.row(c)).norm());
    centroids = std::move(updated);
    if (shift < static_cast<Scalar>(tol)) break;
  }
  result.centroids = std::move(centroids);
  result.effective_clusters = static_cast<Index>(std::count_if(counts.begin(), counts.end(), [](Index c) { return c > 0; }));
  return result;
}

struct SpectralConfig {
  Index num_clusters = 2;
  LaplacianMode laplacian = LaplacianMode::Normalized;
  int restarts = 500;
  int kmeans_max_iter = 300;
  double kmeans_tol = 1e-8;
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::Uniform;
  unsigned threads = 1;
  /// Objective used to pick the best restart. Defaults to Volume for the
  /// normalized Laplacian and Size for the unnormalized one.
  std::optional<KappaMode> kappa;

  KappaMode selection_kappa() const {
    if (kappa) return *kappa;
    return laplacian == LaplacianMode::Normalized ? KappaMode::Volume : KappaMode::Size;
  }
};

/// Full eigendecomposition of a Laplacian, eigenvalues ascending.
template <typename Scalar>
struct SpectralDecomposition {
  LaplacianMode mode = LaplacianMode::Normalized;
  Vector<Scalar> eigenvalues;
  Matrix<Scalar> eigenvectors;
};

inline constexpr double kEigenResidualTolerance = 1e-6;

template <typename Derived>
SpectralDecomposition<typename Derived::Scalar> decompose(const Eigen::MatrixBase<Derived>& similarity,
                                                          LaplacianMode mode) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> l = laplacian(similarity, mode);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(l);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition did not converge");
  SpectralDecomposition<Scalar> result{mode, solver.eigenvalues(), solver.eigenvectors()};
  // Residual relative to the operator scale; the unnormalized Laplacian
  // scales with the similarity values.
  const Scalar scale = std::max<Scalar>(Scalar(1), l.cwiseAbs().rowwise().sum().maxCoeff());
  const Matrix<Scalar> residual =
      l * result.eigenvectors - result.eigenvectors * result.eigenvalues.asDiagonal();
  const Scalar worst = residual.colwise().norm().maxCoeff();
  if (!(worst < static_cast<Scalar>(kEigenResidualTolerance) * scale))
    throw Error("eigendecomposition residual " + std::to_string(static_cast<double>(worst)) +
                " exceeds tolerance");
  return result;
}

/// Eigenvectors of the `num_clusters` smallest eigenvalues as an N x M
/// matrix; rows are scaled to unit length for the normalized Laplacian
/// (zero rows stay zero).
template <typename Scalar>
Matrix<Scalar> spectral_embedding(const SpectralDecomposition<Scalar>& decomposition, Index num_clusters) {
  if (num_clusters < 1 || num_clusters > decomposition.eigenvectors.cols())
    throw Error("spectral embedding dimension out of range");
  Matrix<Scalar> embedding = decomposition.eigenvectors.leftCols(num_clusters);
  if (decomposition.mode == LaplacianMode::Normalized) {
    for (Index i = 0; i < embedding.rows(); ++i) {
      const Scalar norm = embedding.row(i).norm();
      if (norm > Scalar(0)) embedding.row(i) /= norm;
    }
  }
  return embedding;
}

template <typename Scalar>
struct SpectralResult {
  Clustering clustering;
  Scalar phi_within = 0;
  int best_restart = -1;
  /// Restarts whose k-means ended with fewer than M nonempty clusters.
  int degenerate_restarts = 0;
};

/// K-means with `cfg.restarts` seeded restarts (restart r uses seed + r) on a
/// precomputed decomposition. The restart with the largest phi_within wins;
/// ties go to the lower restart index.
template <typename Derived>
SpectralResult<typename Derived::Scalar> spectral_cluster(
    const Eigen::MatrixBase<Derived>& similarity,
    const SpectralDecomposition<typename Derived::Scalar>& decomposition, const SpectralConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  const Index n = similarity.rows();
  if (cfg.num_clusters < 2) throw Error("spectral clustering needs M >= 2");
  if (cfg.num_clusters >= n)
    throw Error("spectral clustering needs M < N (M = " + std::to_string(cfg.num_clusters) +
                ", N = " + std::to_string(n) + ")");
  if (cfg.restarts < 1) throw Error("spectral clustering needs at least one restart");
  if (decomposition.mode != cfg.laplacian || decomposition.eigenvectors.rows() != n)
    throw Error("spectral decomposition does not match the configuration");

  const Matrix<Scalar> points = spectral_embedding(decomposition, cfg.num_clusters);
  const KappaMode kappa = cfg.selection_kappa();

  struct Run {
    bool valid = false;
    Clustering clustering;
    Scalar value = 0;
  };
  std::vector<Run> runs(static_cast<std::size_t>(cfg.restarts));
  parallel_for(runs.size(), cfg.threads, [&](std::size_t r) {
    const auto km = kmeans(points, cfg.num_clusters, cfg.seed + r, cfg.kmeans_max_iter, cfg.kmeans_tol, cfg.init);
    if (km.effective_clusters != cfg.num_clusters) return;
    Run& run = runs[r];
    run.clustering = Clustering::from_labels(km.labels);
    run.value = phi_within(similarity, run.clustering, kappa);
    run.valid = true;
  });

  SpectralResult<Scalar> result;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!runs[r].valid) {
      ++result.degenerate_restarts;
      continue;
    }
    if (result.best_restart < 0 || runs[r].value > result.phi_within) {
      result.best_restart = static_cast<int>(r);
      result.phi_within = runs[r].value;
      result.clustering = runs[r].clustering;
    }
  }
  if (result.best_restart < 0)
    throw Error("k-means produced fewer than " + std::to_string(cfg.num_clusters) +
                " clusters in every restart");
  return result;
}

template <typename Derived>
SpectralResult<typename Derived::Scalar> spectral_cluster(const Eigen::MatrixBase<Derived>& similarity,
                                                          const SpectralConfig& cfg) {
  if ((similarity.array() == 0).all()) throw Error("similarity matrix is all zero");
  return spectral_cluster(similarity, decompose(similarity, cfg.laplacian), cfg);
}

/// select_m with spectral clustering as the solver; the decomposition is
/// shared across all M. Restarts are ranked by `kappa`.
template <typename Derived>
ModelSelection<typename Derived::Scalar> select_m_spectral(const Eigen::MatrixBase<Derived>& similarity,
                                                           std::span<const Index> m_range,
                                                           SpectralConfig cfg, KappaMode kappa) {
  if ((similarity.array() == 0).all()) throw Error("similarity matrix is all zero");
  const auto decomposition = decompose(similarity, cfg.laplacian);
  cfg.kappa = kappa;
  return select_m(
      similarity, m_range,
      [&](Index m) {
        SpectralConfig per_m = cfg;
        per_m.num_clusters = m;
        return spectral_cluster(similarity, decomposition, per_m).clustering;
      },
      kappa);
}

}  // namespace rolenet
