#include "rolenet/graph.hpp"

#include "rolenet/csv.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

namespace rolenet {

MultiLayerGraph::MultiLayerGraph(std::vector<std::string> node_labels,
                                 std::vector<std::string> layer_names,
                                 std::vector<Eigen::MatrixXd> layers, WeightMap weights)
    : node_labels_(std::move(node_labels)),
      layer_names_(std::move(layer_names)),
      layers_(std::move(layers)),
      weights_(std::move(weights)) {
  const Index n = num_nodes();
  if (n > kMaxDenseNodes)
    throw Error("graph has " + std::to_string(n) + " nodes; dense limit is " +
                std::to_string(kMaxDenseNodes));
  if (layer_names_.size() != layers_.size())
    throw Error("layer name count does not match layer count");
  for (Index i = 0; i < n; ++i) {
    if (node_labels_[i].empty()) throw Error("empty node label");
    if (!node_index_.emplace(node_labels_[i], i).second)
      throw Error("duplicate node label '" + node_labels_[i] + "'");
  }
  std::set<std::string> seen_layers;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (!seen_layers.insert(layer_names_[l]).second)
      throw Error("duplicate layer name '" + layer_names_[l] + "'");
    const auto& a = layers_[l];
    if (a.rows() != n || a.cols() != n)
      throw Error("layer '" + layer_names_[l] + "' is not " + std::to_string(n) + "x" +
                  std::to_string(n));
    if (!(a.array() == 0.0 || a.array() == 1.0).all())
      throw Error("layer '" + layer_names_[l] + "' is not binary");
    if ((a.diagonal().array() != 0.0).any())
      throw Error("layer '" + layer_names_[l] + "' has self-loops");
  }
}

void MultiLayerGraph::check_layer(Index layer) const {
  if (layer < 0 || layer >= num_layers())
    throw std::out_of_range("layer index " + std::to_string(layer) + " out of range [0, " +
                            std::to_string(num_layers()) + ")");
}

const Eigen::MatrixXd& MultiLayerGraph::adjacency(Index layer) const {
  check_layer(layer);
  return layers_[static_cast<std::size_t>(layer)];
}

NodeId MultiLayerGraph::node(Index index) const {
  if (index < 0 || index >= num_nodes()) throw std::out_of_range("node index out of range");
  return {index, node_labels_[static_cast<std::size_t>(index)]};
}

LayerId MultiLayerGraph::layer(Index index) const {
  check_layer(index);
  return {index, layer_names_[static_cast<std::size_t>(index)]};
}

std::optional<Index> MultiLayerGraph::find_node(const std::string& label) const {
  if (auto it = node_index_.find(label); it != node_index_.end()) return it->second;
  return std::nullopt;
}

std::optional<Index> MultiLayerGraph::find_layer(const std::string& name) const {
  auto it = std::find(layer_names_.begin(), layer_names_.end(), name);
  if (it == layer_names_.end()) return std::nullopt;
  return static_cast<Index>(it - layer_names_.begin());
}

Index MultiLayerGraph::num_edges(Index layer) const {
  return static_cast<Index>(adjacency(layer).sum());
}

IngestResult ingest_edge_list(std::span<const EdgeRow> rows,
                              std::span<const std::string> layer_order) {
  if (rows.empty()) throw ParseError("empty edge list");

  std::vector<std::string> labels;
  std::map<std::string, Index> node_index;
  std::vector<std::string> layers(layer_order.begin(), layer_order.end());
  std::map<std::string, Index> layer_index;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (!layer_index.emplace(layers[l], static_cast<Index>(l)).second)
      throw ParseError("duplicate layer name '" + layers[l] + "' in layer order");
  }
  const bool fixed_layers = !layer_order.empty();

  auto node_of = [&](const std::string& label) {
    auto [it, inserted] = node_index.emplace(label, static_cast<Index>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  struct Edge {
    Index layer, src, dst;
  };
  std::vector<Edge> edges;
  MultiLayerGraph::WeightMap weights;
  IngestReport report;
  report.rows = rows.size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.src.empty() || row.dst.empty() || row.layer.empty())
      throw ParseError("empty src, dst or layer field", r + 1);
    Index layer = 0;
    if (auto it = layer_index.find(row.layer); it != layer_index.end()) {
      layer = it->second;
    } else if (fixed_layers) {
      throw ParseError("unknown layer '" + row.layer + "'", r + 1);
    } else {
      layer = static_cast<Index>(layers.size());
      layers.push_back(row.layer);
      layer_index.emplace(row.layer, layer);
    }
    const Index src = node_of(row.src);
    const Index dst = node_of(row.dst);
    if (src == dst) {
      ++report.dropped_self_loops;
      continue;
    }
    edges.push_back({layer, src, dst});
    if (row.weight) weights[{layer, src, dst}] += *row.weight;
  }

  const Index n = static_cast<Index>(labels.size());
  if (n > kMaxDenseNodes)
    throw Error("edge list has " + std::to_string(n) + " nodes; dense limit is " +
                std::to_string(kMaxDenseNodes));
  std::vector<Eigen::MatrixXd> adjacency(layers.size(), Eigen::MatrixXd::Zero(n, n));
  for (const auto& e : edges) {
    double& cell = adjacency[static_cast<std::size_t>(e.layer)](e.src, e.dst);
    if (cell != 0.0) ++report.duplicate_edges;
    cell = 1.0;
  }
  return {MultiLayerGraph(std::move(labels), std::move(layers), std::move(adjacency),
                          std::move(weights)),
          report};
}

std::vector<EdgeRow> read_edge_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::next_line(in, line, line_number)) throw ParseError("empty input");
  const auto header = csv::split(line);
  if (header.size() < 3 || header.size() > 4 || header[0] != "src" || header[1] != "dst" ||
      header[2] != "layer" || (header.size() == 4 && header[3] != "weight"))
    throw ParseError("expected header 'src,dst,layer[,weight]'", line_number);

  std::vector<EdgeRow> rows;
  while (csv::next_line(in, line, line_number)) {
    std::vector<std::string> fields;
    try {
      fields = csv::split(line);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_number);
    }
    if (fields.size() != 3 && fields.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_number);
    EdgeRow row{fields[0], fields[1], fields[2], std::nullopt};
    if (row.src.empty() || row.dst.empty() || row.layer.empty())
      throw ParseError("empty src, dst or layer field", line_number);
    if (fields.size() == 4 && !fields[3].empty()) {
      try {
        row.weight = csv::parse_double(fields[3]);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_number);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("edge list has no rows");
  return rows;
}

IngestResult read_edge_list(const std::filesystem::path& path,
                            std::span<const std::string> layer_order) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path.string() + "'");
  const auto rows = read_edge_csv(in);
  return ingest_edge_list(rows, layer_order);
}

void write_edge_csv(std::ostream& out, const MultiLayerGraph& graph) {
  out << "src,dst,layer\n";
  const Index n = graph.num_nodes();
  if (n == 0) return;
  const auto& labels = graph.node_labels();
  auto label = [&](Index i) { return csv::escape(labels[static_cast<std::size_t>(i)]); };
  // Self-loop rows declare every node (and any edgeless layer) in index order,
  // so re-ingesting yields the same indices and matrices.
  const auto first_layer = csv::escape(graph.layer_names().front());
  for (Index i = 0; i < n; ++i) out << label(i) << ',' << label(i) << ',' << first_layer << '\n';
  for (Index l = 0; l < graph.num_layers(); ++l) {
    const auto& a = graph.adjacency(l);
    const auto layer = csv::escape(graph.layer_names()[static_cast<std::size_t>(l)]);
    if (l > 0 && graph.num_edges(l) == 0) out << label(0) << ',' << label(0) << ',' << layer << '\n';
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (a(i, j) != 0.0) out << label(i) << ',' << label(j) << ',' << layer << '\n';
      }
    }
  }
}

Eigen::VectorXd out_degree(const MultiLayerGraph& graph, Index layer) {
  return graph.adjacency(layer).rowwise().sum();
}

Eigen::VectorXd in_degree(const MultiLayerGraph& graph, Index layer) {
  return graph.adjacency(layer).colwise().sum().transpose();
}

}  // namespace rolenet
