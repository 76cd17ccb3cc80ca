#include "rolenet/pipeline.hpp"

#include "rolenet/csv.hpp"
#include "rolenet/proxsim.hpp"
#include "rolenet/synth.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace rolenet {

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Spectral ? "spectral" : "agglomerative";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "spectral") return Algorithm::Spectral;
  if (name == "agglomerative") return Algorithm::Agglomerative;
  throw Error("unknown algorithm '" + name + "' (expected spectral, agglomerative)");
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

std::string to_string(KMeansInit init) { return init == KMeansInit::Uniform ? "uniform" : "kmeans++"; }

KMeansInit parse_init(const std::string& name) {
  if (name == "uniform") return KMeansInit::Uniform;
  if (name == "kmeans++") return KMeansInit::PlusPlus;
  throw Error("unknown k-means init '" + name + "' (expected uniform, kmeans++)");
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const nlohmann::json& input_doc, const std::filesystem::path& base_dir) {
  const nlohmann::json& doc = input_doc.contains("config") ? input_doc.at("config") : input_doc;
  PipelineConfig cfg;
  try {
    cfg.input = resolve(base_dir, doc.at("input").get<std::string>());
    if (doc.contains("planted") && !doc.at("planted").is_null())
      cfg.planted = resolve(base_dir, doc.at("planted").get<std::string>());
    cfg.layers = doc.value("layers", cfg.layers);
    cfg.max_order = doc.value("K", cfg.max_order);
    cfg.include_between = doc.value("include_between", cfg.include_between);
    cfg.log1p = doc.value("log1p", cfg.log1p);
    cfg.distance = doc.value("distance", cfg.distance);
    if (doc.contains("kappa")) cfg.kappa = parse_kappa(doc.at("kappa").get<std::string>());
    if (doc.contains("algorithm")) cfg.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    if (doc.contains("laplacian")) cfg.laplacian = parse_laplacian(doc.at("laplacian").get<std::string>());
    if (doc.contains("linkage")) cfg.linkage = parse_linkage(doc.at("linkage").get<std::string>());
    if (doc.contains("m_range")) {
      const auto& range = doc.at("m_range");
      if (range.is_object()) {
        cfg.m_range.clear();
        for (Index m = range.at("min").get<Index>(); m <= range.at("max").get<Index>(); ++m) cfg.m_range.push_back(m);
      } else {
        cfg.m_range = range.get<std::vector<Index>>();
      }
    }
    cfg.restarts = doc.value("restarts", cfg.restarts);
    cfg.kmeans_max_iter = doc.value("kmeans_max_iter", cfg.kmeans_max_iter);
    cfg.kmeans_tol = doc.value("kmeans_tol", cfg.kmeans_tol);
    if (doc.contains("kmeans_init")) cfg.kmeans_init = parse_init(doc.at("kmeans_init").get<std::string>());
    cfg.seed = doc.value("seed", cfg.seed);
    if (doc.contains("output_dir")) cfg.output_dir = resolve(base_dir, doc.at("output_dir").get<std::string>());
    cfg.threads = input_doc.value("threads", doc.value("threads", 0u));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid pipeline config: ") + e.what());
  } catch (const Error& e) {
    throw ParseError(std::string("invalid pipeline config: ") + e.what());
  }
  if (cfg.distance != "l1") throw Error("unsupported distance '" + cfg.distance + "' (only l1)");
  if (cfg.max_order < 1) throw Error("K must be >= 1");
  if (cfg.m_range.empty()) throw Error("m_range is empty");
  if (cfg.restarts < 1) throw Error("restarts must be >= 1");
  if (!(cfg.kmeans_tol > 0)) throw Error("kmeans_tol must be positive");
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(doc, path.parent_path());
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json doc;
  doc["input"] = std::filesystem::absolute(input).lexically_normal().string();
  doc["planted"] = planted ? nlohmann::json(std::filesystem::absolute(*planted).lexically_normal().string())
                           : nlohmann::json(nullptr);
  doc["layers"] = layers;
  doc["K"] = max_order;
  doc["include_between"] = include_between;
  doc["log1p"] = log1p;
  doc["distance"] = distance;
  doc["kappa"] = rolenet::to_string(kappa);
  doc["algorithm"] = rolenet::to_string(algorithm);
  doc["laplacian"] = rolenet::to_string(laplacian);
  doc["linkage"] = rolenet::to_string(linkage);
  doc["m_range"] = m_range;
  doc["restarts"] = restarts;
  doc["kmeans_max_iter"] = kmeans_max_iter;
  doc["kmeans_tol"] = kmeans_tol;
  doc["kmeans_init"] = to_string(kmeans_init);
  doc["seed"] = seed;
  return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_clustering_csv(std::ostream& out, const Clustering& clustering, const std::vector<std::string>& labels) {
  if (static_cast<Index>(labels.size()) != clustering.size()) throw Error("clustering and label count disagree");
  out << "node_label,cluster_id\n";
  for (Index i = 0; i < clustering.size(); ++i)
    out << csv::escape(labels[static_cast<std::size_t>(i)]) << ',' << clustering[i] << '\n';
}

Clustering read_clustering_csv(std::istream& in, std::vector<std::string>& labels) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::next_line(in, line, line_number)) throw ParseError("empty clustering file");
  const auto header = csv::split(line);
  if (header.size() != 2 || header[0] != "node_label" || header[1] != "cluster_id")
    throw ParseError("expected header 'node_label,cluster_id'", line_number);
  labels.clear();
  std::vector<Index> assignment;
  Index max_id = -1;
  while (csv::next_line(in, line, line_number)) {
    const auto fields = csv::split(line);
    if (fields.size() != 2) throw ParseError("expected 2 fields", line_number);
    Index id = 0;
    try {
      std::size_t used = 0;
      id = std::stol(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParseError("cluster id '" + fields[1] + "' is not an integer", line_number);
    }
    labels.push_back(fields[0]);
    assignment.push_back(id);
    max_id = std::max(max_id, id);
  }
  if (assignment.empty()) throw ParseError("clustering has no rows");
  return Clustering(std::move(assignment), max_id + 1);
}

void write_curve_csv(std::ostream& out, const ModelSelection<double>& selection) {
  out << "M,phi_within\n";
  for (const auto& point : selection.curve) out << point.num_clusters << ',' << csv::format_double(point.phi_within) << '\n';
}

void write_dendrogram_csv(std::ostream& out, const std::vector<Merge<double>>& merges,
                          const std::vector<std::string>& labels) {
  out << "step,cluster_a,cluster_b,linkage_value\n";
  for (const auto& m : merges) {
    out << m.step << ',' << csv::escape(labels[static_cast<std::size_t>(m.cluster_a)]) << ','
        << csv::escape(labels[static_cast<std::size_t>(m.cluster_b)]) << ',' << csv::format_double(m.linkage) << '\n';
  }
}

Clustering align_clustering(const Clustering& clustering, const std::vector<std::string>& from_labels,
                            const std::vector<std::string>& to_labels) {
  if (from_labels.size() != to_labels.size())
    throw Error("clustering covers " + std::to_string(from_labels.size()) + " nodes, expected " +
                std::to_string(to_labels.size()));
  std::map<std::string, Index> position;
  for (std::size_t i = 0; i < from_labels.size(); ++i) position.emplace(from_labels[i], static_cast<Index>(i));
  std::vector<Index> assignment;
  assignment.reserve(to_labels.size());
  for (const auto& label : to_labels) {
    auto it = position.find(label);
    if (it == position.end()) throw Error("node '" + label + "' missing from clustering");
    assignment.push_back(clustering[it->second]);
  }
  return Clustering(std::move(assignment), clustering.num_clusters());
}

namespace {

SpectralConfig spectral_config(const PipelineConfig& cfg, Index num_clusters) {
  SpectralConfig sc;
  sc.num_clusters = num_clusters;
  sc.laplacian = cfg.laplacian;
  sc.restarts = cfg.restarts;
  sc.kmeans_max_iter = cfg.kmeans_max_iter;
  sc.kmeans_tol = cfg.kmeans_tol;
  sc.seed = cfg.seed;
  sc.init = cfg.kmeans_init;
  sc.threads = cfg.thread_count();
  sc.kappa = cfg.kappa;
  return sc;
}

}  // namespace

Clustering cluster_once(const Eigen::MatrixXd& similarity, Index num_clusters, const PipelineConfig& cfg) {
  if (cfg.algorithm == Algorithm::Agglomerative) return agglomerative(similarity, num_clusters, cfg.linkage);
  return spectral_cluster(similarity, spectral_config(cfg, num_clusters)).clustering;
}

ModelSelection<double> select_clusters(const Eigen::MatrixXd& similarity, const PipelineConfig& cfg) {
  if (cfg.algorithm == Algorithm::Agglomerative) {
    const auto merges = agglomerative_merges(similarity, cfg.linkage);
    const Index n = similarity.rows();
    return select_m(
        similarity, cfg.m_range,
        [&](Index m) {
          const std::vector<Merge<double>> prefix(merges.begin(), merges.begin() + (n - m));
          return clustering_from_merges(n, prefix);
        },
        cfg.kappa);
  }
  return select_m_spectral(similarity, cfg.m_range, spectral_config(cfg, 2), cfg.kappa);
}

namespace {

template <typename Fn>
auto in_stage(const char* stage, const std::filesystem::path& input, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, input, e.what());
  }
}

template <typename Writer>
std::string render(Writer&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

}  // namespace

RunSummary run_pipeline(const PipelineConfig& cfg) {
  if (cfg.output_dir.empty()) throw StageError("run", {}, "no output directory configured");
  const auto& dir = cfg.output_dir;
  RunSummary summary;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text_file(dir / name, text);
    summary.artifacts.push_back(dir / name);
  };

  const auto ingested = in_stage("ingest", cfg.input, [&] {
    if (!std::filesystem::exists(cfg.input)) throw Error("input file does not exist");
    return read_edge_list(cfg.input, cfg.layers);
  });
  const auto& graph = ingested.graph;
  summary.num_nodes = graph.num_nodes();
  summary.num_layers = graph.num_layers();

  const auto embedding = in_stage("features", cfg.input, [&] {
    EmbeddingOptions options;
    options.max_order = cfg.max_order;
    options.include_between = cfg.include_between;
    options.log1p = cfg.log1p;
    options.threads = cfg.thread_count();
    return build_embedding(graph, options);
  });
  emit("embedding.csv", render([&](std::ostream& out) { write_embedding_csv(out, embedding); }));

  const auto similarity = in_stage("similarity", dir / "embedding.csv",
                                   [&] { return to_similarity(l1_distances(embedding.values)); });
  if (similarity.degenerate) std::cerr << "warning: all embeddings are identical; similarity is zero\n";
  emit("similarity.csv",
       render([&](std::ostream& out) { write_matrix_csv(out, similarity.values, embedding.node_labels); }));
  emit("similarity.bin", render([&](std::ostream& out) { write_matrix_binary(out, similarity.values); }));

  const auto selection = in_stage("select-m", dir / "similarity.bin", [&] {
    for (Index m : cfg.m_range) {
      if (m < 2 || m > graph.num_nodes() - 1)
        throw Error("m_range value " + std::to_string(m) + " outside [2, N-1] with N = " +
                    std::to_string(graph.num_nodes()));
    }
    return select_clusters(similarity.values, cfg);
  });
  summary.best_num_clusters = selection.best_num_clusters;
  emit("curve.csv", render([&](std::ostream& out) { write_curve_csv(out, selection); }));
  emit("clustering.csv",
       render([&](std::ostream& out) { write_clustering_csv(out, selection.best, embedding.node_labels); }));
  if (cfg.algorithm == Algorithm::Agglomerative) {
    const auto merges = agglomerative_merges(similarity.values, cfg.linkage);
    emit("dendrogram.csv", render([&](std::ostream& out) { write_dendrogram_csv(out, merges, embedding.node_labels); }));
  }

  const LabelThresholds thresholds;
  const auto profiles = in_stage("profile", dir / "clustering.csv", [&] {
    return label(profile(embedding, selection.best), embedding.layer_names, thresholds);
  });
  emit("profile.json", profile_report(profiles, embedding, thresholds).dump(2) + "\n");
  emit("profile_bars.csv", render([&](std::ostream& out) { write_profile_bars_csv(out, profiles, embedding); }));

  nlohmann::json results{{"num_nodes", graph.num_nodes()},
                         {"num_layers", graph.num_layers()},
                         {"dropped_self_loops", ingested.report.dropped_self_loops},
                         {"degenerate_similarity", similarity.degenerate},
                         {"best_M", selection.best_num_clusters}};
  if (cfg.planted) {
    const auto planted_roles = in_stage("score", *cfg.planted, [&] {
      std::ifstream in(*cfg.planted);
      if (!in) throw Error("cannot open planted file");
      const auto roles = read_planted_csv(in);
      std::map<std::string, Index> role_ids;
      for (const auto& [node, role] : roles) role_ids.emplace(role, static_cast<Index>(role_ids.size()));
      std::vector<Index> planted;
      for (const auto& node : graph.node_labels()) {
        auto it = roles.find(node);
        if (it == roles.end()) throw Error("node '" + node + "' has no planted role");
        planted.push_back(role_ids.at(it->second));
      }
      return planted;
    });
    std::ostringstream ari_csv;
    ari_csv << "M,ari\n";
    for (const auto& point : selection.curve) {
      const double ari = adjusted_rand_index(point.clustering.assignment(), planted_roles);
      summary.ari_by_m.emplace_back(point.num_clusters, ari);
      ari_csv << point.num_clusters << ',' << csv::format_double(ari) << '\n';
    }
    emit("ari.csv", ari_csv.str());
    results["ari_best_M"] = adjusted_rand_index(selection.best.assignment(), planted_roles);
  }

  nlohmann::json manifest;
  manifest["tool"] = "rolenet";
  manifest["version"] = kVersion;
  manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
  manifest["config"] = cfg.to_json();
  manifest["results"] = results;
  std::vector<std::string> names;
  for (const auto& a : summary.artifacts) names.push_back(a.filename().string());
  names.push_back("manifest.json");
  manifest["artifacts"] = names;
  emit("manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace rolenet
