#pragma once

#include "rolenet/types.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace rolenet {

/// Partition of N nodes into M nonempty clusters labeled 0..M-1.
class Clustering {
 public:
  Clustering() = default;
  /// Throws if a label is outside [0, num_clusters) or a cluster is empty.
  Clustering(std::vector<Index> assignment, Index num_clusters);

  /// Relabels clusters in order of first appearance.
  static Clustering from_labels(std::span<const Index> labels);

  const std::vector<Index>& assignment() const noexcept { return assignment_; }
  Index operator[](Index node) const { return assignment_[static_cast<std::size_t>(node)]; }
  Index num_clusters() const noexcept { return num_clusters_; }
  Index size() const noexcept { return static_cast<Index>(assignment_.size()); }
  std::vector<Index> cluster_sizes() const;

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  std::vector<Index> assignment_;
  Index num_clusters_ = 0;
};

/// Per-cluster normalization of the objectives.
enum class KappaMode {
  Size,             // |C|
  Volume,           // sum over members of their similarity row sums
  SizeSqMinusSize,  // |C|^2 - |C|
};

std::string to_string(KappaMode kappa);
KappaMode parse_kappa(const std::string& name);

/// Within-cluster sums, cut sums and volumes, one entry per cluster.
template <typename Scalar>
struct ClusterSums {
  std::vector<Scalar> within;
  std::vector<Scalar> cut;
  std::vector<Scalar> volume;
  std::vector<Index> sizes;
};

template <typename Derived>
ClusterSums<typename Derived::Scalar> cluster_sums(const Eigen::MatrixBase<Derived>& similarity,
                                                  const Clustering& clustering) {
  using Scalar = typename Derived::Scalar;
  const Index n = similarity.rows();
  if (similarity.cols() != n) throw Error("similarity matrix must be square");
  if (clustering.size() != n)
    throw Error("clustering has " + std::to_string(clustering.size()) + " nodes, similarity has " +
                std::to_string(n));
  const auto m = static_cast<std::size_t>(clustering.num_clusters());
  ClusterSums<Scalar> sums{std::vector<Scalar>(m, Scalar(0)), std::vector<Scalar>(m, Scalar(0)),
                           std::vector<Scalar>(m, Scalar(0)), std::vector<Index>(m, 0)};
  for (Index j = 0; j < n; ++j) {
    const auto cj = static_cast<std::size_t>(clustering[j]);
    ++sums.sizes[cj];
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const auto ci = static_cast<std::size_t>(clustering[i]);
      const Scalar s = similarity(i, j);
      sums.volume[ci] += s;
      if (ci == cj) {
        sums.within[ci] += s;
      } else {
        sums.cut[ci] += s;
      }
    }
  }
  return sums;
}

template <typename Scalar>
Scalar kappa_value(const ClusterSums<Scalar>& sums, std::size_t cluster, KappaMode kappa) {
  const auto size = static_cast<Scalar>(sums.sizes[cluster]);
  switch (kappa) {
    case KappaMode::Size:
      return size;
    case KappaMode::Volume:
      return sums.volume[cluster];
    case KappaMode::SizeSqMinusSize:
      return size * size - size;
  }
  return Scalar(0);
}

namespace detail {

template <typename Scalar>
Scalar normalized_total(const ClusterSums<Scalar>& sums, const std::vector<Scalar>& terms,
                        KappaMode kappa) {
  Scalar total = Scalar(0);
  for (std::size_t m = 0; m < terms.size(); ++m) {
    const Scalar k = kappa_value(sums, m, kappa);
    // kappa == 0 forces a zero numerator (empty volume or a singleton)
    if (k != Scalar(0)) total += terms[m] / k;
  }
  return total;
}

}  // namespace detail

/// sum_m (1/kappa(C_m)) sum_{i,j in C_m, i != j} S_ij
template <typename Derived>
typename Derived::Scalar phi_within(const Eigen::MatrixBase<Derived>& similarity,
                                    const Clustering& clustering, KappaMode kappa) {
  const auto sums = cluster_sums(similarity, clustering);
  return detail::normalized_total(sums, sums.within, kappa);
}

/// sum_m (1/kappa(C_m)) sum_{i in C_m, j not in C_m} S_ij
template <typename Derived>
typename Derived::Scalar phi_between(const Eigen::MatrixBase<Derived>& similarity,
                                     const Clustering& clustering, KappaMode kappa) {
  const auto sums = cluster_sums(similarity, clustering);
  return detail::normalized_total(sums, sums.cut, kappa);
}

inline constexpr Index kBruteForceMaxNodes = 12;
inline constexpr Index kBruteForceMaxClusters = 4;

/// Exhaustive argmax of phi_within over all partitions into exactly M
/// nonempty blocks. Partitions are visited as restricted growth strings in
/// lexicographic order and only a strictly better value replaces the
/// incumbent, so ties resolve to the lexicographically smallest assignment.
template <typename Derived>
Clustering brute_force_best(const Eigen::MatrixBase<Derived>& similarity, Index num_clusters,
                            KappaMode kappa) {
  using Scalar = typename Derived::Scalar;
  const Index n = similarity.rows();
  if (n > kBruteForceMaxNodes)
    throw Error("brute force limited to " + std::to_string(kBruteForceMaxNodes) + " nodes");
  if (num_clusters < 1 || num_clusters > kBruteForceMaxClusters)
    throw Error("brute force limited to 1.." + std::to_string(kBruteForceMaxClusters) + " clusters");
  if (num_clusters > n) throw Error("more clusters than nodes");

  std::vector<Index> labels(static_cast<std::size_t>(n), 0);
  std::vector<Index> best;
  Scalar best_value = -std::numeric_limits<Scalar>::infinity();

  std::function<void(Index, Index)> visit = [&](Index node, Index used) {
    if (node == n) {
      if (used != num_clusters) return;
      const Scalar value = phi_within(similarity, Clustering(labels, num_clusters), kappa);
      if (value > best_value) {
        best_value = value;
        best = labels;
      }
      return;
    }
    if (num_clusters - used > n - node) return;
    const Index limit = std::min(used + 1, num_clusters);
    for (Index label = 0; label < limit; ++label) {
      labels[static_cast<std::size_t>(node)] = label;
      visit(node + 1, std::max(used, label + 1));
    }
  };
  visit(0, 0);
  return Clustering(best, num_clusters);
}

/// Best clustering and objective per candidate cluster count.
template <typename Scalar>
struct ModelSelection {
  struct Point {
    Index num_clusters;
    Scalar phi_within;
    Clustering clustering;
  };
  Index best_num_clusters = 0;
  Clustering best;
  std::vector<Point> curve;
  /// Every candidate scored zero (all-zero similarity).
  bool degenerate = false;
};

/// Runs `solve(M)` for every M in `m_range` (ascending) and keeps the M with
/// the largest phi_within; ties go to the smaller M. `solve` returns its best
/// clustering for that M.
template <typename Derived, typename Solver>
ModelSelection<typename Derived::Scalar> select_m(const Eigen::MatrixBase<Derived>& similarity,
                                                  std::span<const Index> m_range, Solver&& solve,
                                                  KappaMode kappa) {
  using Scalar = typename Derived::Scalar;
  if (m_range.empty()) throw Error("empty range of cluster counts");
  std::vector<Index> candidates(m_range.begin(), m_range.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (Index m : candidates) {
    if (m < 1 || m >= similarity.rows())
      throw Error("cluster count " + std::to_string(m) + " outside [1, N-1] for N = " +
                  std::to_string(similarity.rows()));
  }

  ModelSelection<Scalar> result;
  Scalar best_value = -std::numeric_limits<Scalar>::infinity();
  bool all_zero = true;
  for (Index m : candidates) {
    Clustering clustering;
    try {
      clustering = solve(m);
    } catch (const std::exception& e) {
      throw Error("solver failed at M = " + std::to_string(m) + ": " + e.what());
    }
    const Scalar value = phi_within(similarity, clustering, kappa);
    if (value != Scalar(0)) all_zero = false;
    if (value > best_value) {
      best_value = value;
      result.best_num_clusters = m;
      result.best = clustering;
    }
    result.curve.push_back({m, value, std::move(clustering)});
  }
  result.degenerate = all_zero;
  return result;
}

}  // namespace rolenet
