#pragma once

#include "rolenet/types.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace rolenet {

/// Largest node count supported by the dense adjacency representation
/// (one N x N double matrix per layer).
inline constexpr Index kMaxDenseNodes = 5000;

struct NodeId {
  Index index = 0;
  std::string label;
};

struct LayerId {
  Index index = 0;
  std::string name;
};

/// N nodes shared by L layers, each a binary directed adjacency matrix with
/// an empty diagonal. Immutable once built.
class MultiLayerGraph {
 public:
  using WeightMap = std::map<std::tuple<Index, Index, Index>, double>;  // (layer, src, dst)

  MultiLayerGraph(std::vector<std::string> node_labels, std::vector<std::string> layer_names,
                  std::vector<Eigen::MatrixXd> layers, WeightMap weights = {});

  Index num_nodes() const noexcept { return static_cast<Index>(node_labels_.size()); }
  Index num_layers() const noexcept { return static_cast<Index>(layers_.size()); }

  const Eigen::MatrixXd& adjacency(Index layer) const;
  const std::vector<std::string>& node_labels() const noexcept { return node_labels_; }
  const std::vector<std::string>& layer_names() const noexcept { return layer_names_; }

  NodeId node(Index index) const;
  LayerId layer(Index index) const;
  std::optional<Index> find_node(const std::string& label) const;
  std::optional<Index> find_layer(const std::string& name) const;

  Index num_edges(Index layer) const;

  /// Summed edge weights as read from input. Never used by the feature math.
  const WeightMap& weights() const noexcept { return weights_; }

 private:
  void check_layer(Index layer) const;

  std::vector<std::string> node_labels_;
  std::vector<std::string> layer_names_;
  std::vector<Eigen::MatrixXd> layers_;
  std::map<std::string, Index> node_index_;
  WeightMap weights_;
};

struct EdgeRow {
  std::string src;
  std::string dst;
  std::string layer;
  std::optional<double> weight;
};

struct IngestReport {
  std::size_t rows = 0;
  std::size_t dropped_self_loops = 0;
  std::size_t duplicate_edges = 0;
};

struct IngestResult {
  MultiLayerGraph graph;
  IngestReport report;
};

/// Builds a graph from edge rows. Node indices follow first appearance (src
/// before dst within a row). Layer indices follow `layer_order` when given
/// (unknown layers are then an error), otherwise first appearance.
/// Duplicate edges collapse; self-loops are dropped but still register the node.
IngestResult ingest_edge_list(std::span<const EdgeRow> rows,
                              std::span<const std::string> layer_order = {});

/// Parses `src,dst,layer[,weight]` CSV with a header row.
std::vector<EdgeRow> read_edge_csv(std::istream& in);
IngestResult read_edge_list(const std::filesystem::path& path,
                            std::span<const std::string> layer_order = {});

/// Canonical export: one self-loop row per node in index order (these only
/// declare nodes), then edges sorted by (layer, src, dst) index. Re-ingesting
/// the output reproduces the same node indices, layers and matrices.
void write_edge_csv(std::ostream& out, const MultiLayerGraph& graph);

Eigen::VectorXd out_degree(const MultiLayerGraph& graph, Index layer);
Eigen::VectorXd in_degree(const MultiLayerGraph& graph, Index layer);

}  // namespace rolenet
