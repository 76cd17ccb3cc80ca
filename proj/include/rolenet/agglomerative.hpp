#pragma once

#include "rolenet/objective.hpp"
#include "rolenet/types.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace rolenet {

enum class LinkageMode { Single, Complete, Average };

std::string to_string(LinkageMode mode);
LinkageMode parse_linkage(const std::string& name);

/// One merge step. Clusters are named by their smallest node index, so the
/// merged cluster keeps `cluster_a`.
template <typename Scalar>
struct Merge {
  Index step = 0;
  Index cluster_a = 0;
  Index cluster_b = 0;
  Scalar linkage = 0;
};

/// Greedy merges from singletons down to `stop_at` clusters. Each step merges
/// the pair with the highest linkage similarity (single: max, complete: min,
/// average: mean of cross similarities); ties go to the smallest
/// (cluster_a, cluster_b). Cross sums are updated incrementally, giving
/// O(N^3) total work.
template <typename Derived>
std::vector<Merge<typename Derived::Scalar>> agglomerative_merges(
    const Eigen::MatrixBase<Derived>& similarity, LinkageMode linkage, Index stop_at = 1) {
  using Scalar = typename Derived::Scalar;
  const Index n = similarity.rows();
  if (similarity.cols() != n) throw Error("similarity matrix must be square");
  if (stop_at < 1) throw Error("agglomerative clustering needs M >= 1");
  if (stop_at > n)
    throw Error("agglomerative clustering: M = " + std::to_string(stop_at) + " exceeds N = " +
                std::to_string(n));

  // link(a, b) holds the cross sum (average), max (single) or min (complete)
  // between the clusters named a and b.
  Matrix<Scalar> link = similarity;
  std::vector<Index> size(static_cast<std::size_t>(n), 1);
  std::vector<Index> active(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = i;

  auto value = [&](Index a, Index b) {
    if (linkage == LinkageMode::Average)
      return link(a, b) / static_cast<Scalar>(size[static_cast<std::size_t>(a)] * size[static_cast<std::size_t>(b)]);
    return link(a, b);
  };

  std::vector<Merge<Scalar>> merges;
  for (Index step = 0; static_cast<Index>(active.size()) > stop_at; ++step) {
    Index best_a = -1, best_b = -1;
    Scalar best = 0;
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const Scalar v = value(active[x], active[y]);
        if (best_a < 0 || v > best) {
          best = v;
          best_a = active[x];
          best_b = active[y];
        }
      }
    }
    merges.push_back({step, best_a, best_b, best});
    for (Index c : active) {
      if (c == best_a || c == best_b) continue;
      Scalar merged;
      switch (linkage) {
        case LinkageMode::Single:
          merged = std::max(link(best_a, c), link(best_b, c));
          break;
        case LinkageMode::Complete:
          merged = std::min(link(best_a, c), link(best_b, c));
          break;
        case LinkageMode::Average:
        default:
          merged = link(best_a, c) + link(best_b, c);
          break;
      }
      link(best_a, c) = merged;
      link(c, best_a) = merged;
    }
    size[static_cast<std::size_t>(best_a)] += size[static_cast<std::size_t>(best_b)];
    active.erase(std::find(active.begin(), active.end(), best_b));
  }
  return merges;
}

/// Cluster assignment after replaying `merges` on N singletons. Clusters are
/// numbered by their smallest node index.
template <typename Scalar>
Clustering clustering_from_merges(Index num_nodes, const std::vector<Merge<Scalar>>& merges) {
  std::vector<Index> owner(static_cast<std::size_t>(num_nodes));
  for (Index i = 0; i < num_nodes; ++i) owner[static_cast<std::size_t>(i)] = i;
  for (const auto& m : merges) {
    for (auto& o : owner) {
      if (o == m.cluster_b) o = m.cluster_a;
    }
  }
  return Clustering::from_labels(owner);
}

template <typename Derived>
Clustering agglomerative(const Eigen::MatrixBase<Derived>& similarity, Index num_clusters,
                         LinkageMode linkage) {
  const auto merges = agglomerative_merges(similarity, linkage, num_clusters);
  return clustering_from_merges(similarity.rows(), merges);
}

}  // namespace rolenet
