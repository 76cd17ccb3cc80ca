#include "rolenet/egofeat.hpp"

#include "rolenet/csv.hpp"
#include "rolenet/parallel.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace rolenet {

namespace {

struct ParsedName {
  Direction direction;
  std::vector<std::string> layers;
  int order;
  int second_order;
};

ParsedName parse_name(const std::string& name) {
  const auto bad = [&] { return ParseError("malformed feature name '" + name + "'"); };
  const auto first = name.find('_');
  const auto last = name.rfind("_k");
  if (first == std::string::npos || last == std::string::npos || last <= first) throw bad();
  ParsedName parsed{};
  const auto dir = name.substr(0, first);
  if (dir == "in") {
    parsed.direction = Direction::In;
  } else if (dir == "out") {
    parsed.direction = Direction::Out;
  } else {
    throw bad();
  }
  const auto pattern = name.substr(first + 1, last - first - 1);
  if (const auto arrow = pattern.find("->"); arrow != std::string::npos) {
    parsed.layers = {pattern.substr(0, arrow), pattern.substr(arrow + 2)};
  } else {
    parsed.layers = {pattern};
  }
  for (const auto& layer : parsed.layers) {
    if (layer.empty()) throw bad();
  }
  const auto orders = name.substr(last + 2);
  try {
    std::size_t used = 0;
    parsed.order = std::stoi(orders, &used);
    parsed.second_order = 0;
    if (used < orders.size()) {
      if (orders[used] != '-') throw bad();
      const auto rest = orders.substr(used + 1);
      std::size_t used2 = 0;
      parsed.second_order = std::stoi(rest, &used2);
      if (used2 != rest.size()) throw bad();
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (parsed.order < 1 || (parsed.layers.size() == 2) != (parsed.second_order >= 1)) throw bad();
  return parsed;
}

}  // namespace

std::string FeatureSpec::name(const std::vector<std::string>& layer_names) const {
  std::string out = direction == Direction::In ? "in_" : "out_";
  out += layer_names.at(static_cast<std::size_t>(layers.at(0)));
  if (is_between()) {
    out += "->" + layer_names.at(static_cast<std::size_t>(layers.at(1)));
    out += "_k" + std::to_string(order) + "-" + std::to_string(second_order);
  } else {
    out += "_k" + std::to_string(order);
  }
  return out;
}

FeatureSpec FeatureSpec::parse(const std::string& name,
                               const std::vector<std::string>& layer_names) {
  const auto parsed = parse_name(name);
  FeatureSpec spec;
  spec.direction = parsed.direction;
  spec.order = parsed.order;
  spec.second_order = parsed.second_order;
  for (const auto& layer : parsed.layers) {
    auto it = std::find(layer_names.begin(), layer_names.end(), layer);
    if (it == layer_names.end()) throw ParseError("unknown layer '" + layer + "' in feature '" + name + "'");
    spec.layers.push_back(static_cast<Index>(it - layer_names.begin()));
  }
  return spec;
}

std::vector<std::string> EmbeddingMatrix::feature_names() const {
  std::vector<std::string> names;
  names.reserve(features.size());
  for (const auto& f : features) names.push_back(f.name(layer_names));
  return names;
}

EmbeddingMatrix build_embedding(const MultiLayerGraph& graph, const EmbeddingOptions& options) {
  const int K = options.max_order;
  if (K < 1) throw Error("maximum walk order must be >= 1");
  const Index L = graph.num_layers();
  const Index n = graph.num_nodes();

  struct Block {
    std::vector<FeatureSpec> features;
    Eigen::MatrixXd values;
  };
  std::vector<std::pair<Index, Index>> tasks;  // (l, l); l == l' means a single layer
  for (Index l = 0; l < L; ++l) tasks.emplace_back(l, l);
  if (options.include_between && K >= 2) {
    for (Index l = 0; l < L; ++l) {
      for (Index m = 0; m < L; ++m) {
        if (l != m) tasks.emplace_back(l, m);
      }
    }
  }

  std::vector<Block> blocks(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t t) {
    const auto [l, m] = tasks[t];
    Block& block = blocks[t];
    if (l == m) {
      const auto counts = normalize_serial(raw_walk_counts(graph.adjacency(l), K));
      block.values.resize(2 * K, n);
      block.values.topRows(K) = counts.in;
      block.values.bottomRows(K) = counts.out;
      for (auto dir : {Direction::In, Direction::Out}) {
        for (int k = 1; k <= K; ++k) block.features.push_back({dir, {l}, k, 0});
      }
    } else {
      const auto counts = between_layer_counts(graph.adjacency(l), graph.adjacency(m), K);
      const auto rows = static_cast<Index>(counts.orders.size());
      block.values.resize(2 * rows, n);
      block.values.topRows(rows) = counts.in;
      block.values.bottomRows(rows) = counts.out;
      for (auto dir : {Direction::In, Direction::Out}) {
        for (const auto& [k, k2] : counts.orders) block.features.push_back({dir, {l, m}, k, k2});
      }
    }
  });

  EmbeddingMatrix embedding;
  embedding.node_labels = graph.node_labels();
  embedding.layer_names = graph.layer_names();
  Index d = 0;
  for (const auto& b : blocks) d += b.values.rows();
  embedding.values.resize(d, n);
  Index row = 0;
  for (auto& b : blocks) {
    embedding.values.middleRows(row, b.values.rows()) = b.values;
    row += b.values.rows();
    embedding.features.insert(embedding.features.end(), b.features.begin(), b.features.end());
  }
  if (options.log1p) embedding.values = embedding.values.array().log1p().matrix();
  return embedding;
}

void write_embedding_csv(std::ostream& out, const EmbeddingMatrix& embedding) {
  out << "node";
  for (const auto& name : embedding.feature_names()) out << ',' << csv::escape(name);
  out << '\n';
  for (Index i = 0; i < embedding.num_nodes(); ++i) {
    out << csv::escape(embedding.node_labels[static_cast<std::size_t>(i)]);
    for (Index f = 0; f < embedding.dimension(); ++f)
      out << ',' << csv::format_double(embedding.values(f, i));
    out << '\n';
  }
}

EmbeddingMatrix read_embedding_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::next_line(in, line, line_number)) throw ParseError("empty embedding file");
  const auto header = csv::split(line);
  if (header.size() < 2 || header[0] != "node")
    throw ParseError("expected header 'node,<feature>,...'", line_number);

  EmbeddingMatrix embedding;
  std::vector<ParsedName> parsed;
  for (std::size_t c = 1; c < header.size(); ++c) {
    parsed.push_back(parse_name(header[c]));
    for (const auto& layer : parsed.back().layers) {
      if (std::find(embedding.layer_names.begin(), embedding.layer_names.end(), layer) ==
          embedding.layer_names.end())
        embedding.layer_names.push_back(layer);
    }
  }
  for (std::size_t c = 1; c < header.size(); ++c)
    embedding.features.push_back(FeatureSpec::parse(header[c], embedding.layer_names));

  std::vector<std::vector<double>> columns;
  while (csv::next_line(in, line, line_number)) {
    const auto fields = csv::split(line);
    if (fields.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields", line_number);
    if (fields[0].empty()) throw ParseError("empty node label", line_number);
    embedding.node_labels.push_back(fields[0]);
    std::vector<double> column;
    for (std::size_t c = 1; c < fields.size(); ++c) {
      try {
        column.push_back(csv::parse_double(fields[c]));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_number);
      }
    }
    columns.push_back(std::move(column));
  }
  if (columns.empty()) throw ParseError("embedding has no nodes");
  const auto d = static_cast<Index>(header.size() - 1);
  embedding.values.resize(d, static_cast<Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (Index f = 0; f < d; ++f) embedding.values(f, static_cast<Index>(i)) = columns[i][static_cast<std::size_t>(f)];
  }
  return embedding;
}

}  // namespace rolenet
