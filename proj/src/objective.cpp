#include "rolenet/objective.hpp"

#include <map>

namespace rolenet {

Clustering::Clustering(std::vector<Index> assignment, Index num_clusters)
    : assignment_(std::move(assignment)), num_clusters_(num_clusters) {
  if (num_clusters_ < 1 && !assignment_.empty()) throw Error("cluster count must be >= 1");
  std::vector<bool> used(static_cast<std::size_t>(std::max<Index>(num_clusters_, 0)), false);
  for (Index label : assignment_) {
    if (label < 0 || label >= num_clusters_)
      throw Error("cluster label " + std::to_string(label) + " outside [0, " +
                  std::to_string(num_clusters_) + ")");
    used[static_cast<std::size_t>(label)] = true;
  }
  for (std::size_t m = 0; m < used.size(); ++m) {
    if (!used[m]) throw Error("cluster " + std::to_string(m) + " is empty");
  }
}

Clustering Clustering::from_labels(std::span<const Index> labels) {
  std::map<Index, Index> relabel;
  std::vector<Index> assignment;
  assignment.reserve(labels.size());
  for (Index label : labels) {
    auto [it, inserted] = relabel.emplace(label, static_cast<Index>(relabel.size()));
    assignment.push_back(it->second);
  }
  return Clustering(std::move(assignment), static_cast<Index>(relabel.size()));
}

std::vector<Index> Clustering::cluster_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(num_clusters_), 0);
  for (Index label : assignment_) ++sizes[static_cast<std::size_t>(label)];
  return sizes;
}

std::string to_string(KappaMode kappa) {
  switch (kappa) {
    case KappaMode::Size:
      return "size";
    case KappaMode::Volume:
      return "volume";
    case KappaMode::SizeSqMinusSize:
      return "size_sq_minus_size";
  }
  return "unknown";
}

KappaMode parse_kappa(const std::string& name) {
  if (name == "size") return KappaMode::Size;
  if (name == "volume") return KappaMode::Volume;
  if (name == "size_sq_minus_size") return KappaMode::SizeSqMinusSize;
  throw Error("unknown kappa mode '" + name + "' (expected size, volume, size_sq_minus_size)");
}

}  // namespace rolenet
