// rolenet: role-based clustering of multi-layer directed networks.

#include "rolenet/pipeline.hpp"
#include "rolenet/proxsim.hpp"
#include "rolenet/synth.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rolenet;
namespace fs = std::filesystem;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

bool is_index_labeling(const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != std::to_string(i)) return false;
  }
  return true;
}

template <typename Fn>
void stage(const char* name, const fs::path& input, Fn&& fn) {
  try {
    if (!input.empty() && !fs::exists(input)) throw Error("input file does not exist");
    fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, input, e.what());
  }
}

struct ClusterOptions {
  std::string algorithm = "spectral";
  std::string laplacian = "normalized";
  std::string linkage = "average";
  std::string kappa = "volume";
  std::string init = "uniform";
  int restarts = 500;
  int max_iter = 300;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  void add_to(CLI::App* app) {
    app->add_option("--algorithm", algorithm, "spectral or agglomerative")->capture_default_str();
    app->add_option("--laplacian", laplacian, "normalized or unnormalized")->capture_default_str();
    app->add_option("--linkage", linkage, "single, complete or average")->capture_default_str();
    app->add_option("--kappa", kappa, "size, volume or size_sq_minus_size")->capture_default_str();
    app->add_option("--kmeans-init", init, "uniform or kmeans++")->capture_default_str();
    app->add_option("--restarts", restarts, "k-means restarts")->capture_default_str();
    app->add_option("--kmeans-max-iter", max_iter)->capture_default_str();
    app->add_option("--kmeans-tol", tol)->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--threads", threads, "worker cap (0: ROLENET_THREADS or all cores)");
  }

  PipelineConfig config() const {
    nlohmann::json doc{{"input", ""},           {"algorithm", algorithm}, {"laplacian", laplacian},
                       {"linkage", linkage},     {"kappa", kappa},         {"kmeans_init", init},
                       {"restarts", restarts},   {"kmeans_max_iter", max_iter},
                       {"kmeans_tol", tol},      {"seed", seed},           {"threads", threads}};
    return PipelineConfig::from_json(doc);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Role-based clustering of multi-layer directed networks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic network with planted roles");
  std::string preset_name, spec_path, synth_dir = ".";
  std::optional<std::uint64_t> synth_seed;
  auto* preset_opt = synth->add_option("--preset", preset_name, "core-periphery, core-periphery-noiseless, six-role");
  synth->add_option("--spec", spec_path, "JSON role specification")->excludes(preset_opt);
  synth->add_option("--seed", synth_seed);
  synth->add_option("--out-dir", synth_dir, "directory for edges.csv, planted.csv, synth_spec.json")
      ->capture_default_str();

  // features
  auto* features = app.add_subcommand("features", "Egonet walk-count embedding of an edge list");
  std::string features_input, features_output = "-", features_layers;
  EmbeddingOptions embedding_options;
  features->add_option("--input", features_input, "edge list CSV")->required();
  features->add_option("--K", embedding_options.max_order, "maximum walk order")->capture_default_str();
  features->add_flag("--between", embedding_options.include_between, "add between-layer features");
  features->add_flag("--log1p", embedding_options.log1p, "log1p-transform features");
  features->add_option("--layers", features_layers, "comma-separated layer order");
  features->add_option("--output", features_output, "embedding CSV (- for stdout)")->capture_default_str();

  // similarity
  auto* similarity = app.add_subcommand("similarity", "L1 distances and similarity matrix from an embedding");
  std::string similarity_input, similarity_output = "-", similarity_binary, distance_output;
  similarity->add_option("--embedding", similarity_input)->required();
  similarity->add_option("--output", similarity_output, "similarity CSV or .bin (- for stdout CSV)")
      ->capture_default_str();
  similarity->add_option("--binary", similarity_binary, "additional binary similarity output");
  similarity->add_option("--distances", distance_output, "distance matrix output");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Cluster a similarity matrix into M clusters");
  std::string cluster_input, cluster_output = "-", dendrogram_output;
  Index cluster_m = 2;
  ClusterOptions cluster_options;
  cluster->add_option("--similarity", cluster_input, "similarity CSV or .bin")->required();
  cluster->add_option("--M", cluster_m, "number of clusters")->required();
  cluster->add_option("--output", cluster_output)->capture_default_str();
  cluster->add_option("--dendrogram", dendrogram_output, "merge list output (agglomerative)");
  cluster_options.add_to(cluster);

  // select-m
  auto* select = app.add_subcommand("select-m", "Pick the number of clusters maximizing phi_within");
  std::string select_input, select_output = "-", curve_output;
  Index m_min = 2, m_max = 11;
  ClusterOptions select_options;
  select->add_option("--similarity", select_input, "similarity CSV or .bin")->required();
  select->add_option("--m-min", m_min)->capture_default_str();
  select->add_option("--m-max", m_max)->capture_default_str();
  select->add_option("--curve", curve_output, "M,phi_within CSV");
  select->add_option("--output", select_output, "clustering CSV for the best M")->capture_default_str();
  select_options.add_to(select);

  // profile
  auto* prof = app.add_subcommand("profile", "Cluster role profiles and labels");
  std::string profile_embedding, profile_clustering, profile_output = "-", bars_output;
  LabelThresholds thresholds;
  prof->add_option("--embedding", profile_embedding)->required();
  prof->add_option("--clustering", profile_clustering)->required();
  prof->add_option("--output", profile_output, "JSON report")->capture_default_str();
  prof->add_option("--bars", bars_output, "cluster,feature_name,mean_value CSV");
  prof->add_option("--intermediation-threshold", thresholds.intermediation_max_balance)->capture_default_str();
  prof->add_option("--specialism-threshold", thresholds.specialism_min_share)->capture_default_str();

  // run
  auto* run = app.add_subcommand("run", "Full pipeline from a JSON config (or a previous manifest)");
  std::string run_config, run_output;
  unsigned run_threads = 0;
  run->add_option("--config", run_config)->required();
  run->add_option("--output-dir", run_output, "overrides output_dir from the config");
  run->add_option("--threads", run_threads, "worker cap (0: ROLENET_THREADS or all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      if (preset_name.empty() && spec_path.empty()) throw Error("synth needs --preset or --spec");
      SynthSpec spec;
      stage("synth", spec_path, [&] {
        if (!spec_path.empty()) {
          std::ifstream in(spec_path);
          spec = synth_spec_from_json(nlohmann::json::parse(in));
        } else {
          spec = preset(preset_name, synth_seed.value_or(0));
        }
        if (synth_seed) spec.seed = *synth_seed;
        const auto result = generate(spec);
        const fs::path dir(synth_dir);
        std::ostringstream edges, planted;
        write_edge_csv(edges, result.graph);
        write_planted_csv(planted, result);
        write_text_file(dir / "edges.csv", edges.str());
        write_text_file(dir / "planted.csv", planted.str());
        write_text_file(dir / "synth_spec.json", to_json(spec).dump(2) + "\n");
        std::cerr << "wrote " << result.graph.num_nodes() << " nodes, " << result.graph.num_layers()
                  << " layer(s) to " << dir.string() << '\n';
      });
    } else if (*features) {
      stage("features", features_input, [&] {
        const auto layers = split_list(features_layers);
        const auto ingested = read_edge_list(features_input, layers);
        if (ingested.report.dropped_self_loops > 0)
          std::cerr << "note: ignored " << ingested.report.dropped_self_loops << " self-loop row(s)\n";
        embedding_options.threads = default_thread_count();
        const auto embedding = build_embedding(ingested.graph, embedding_options);
        std::ostringstream out;
        write_embedding_csv(out, embedding);
        write_output(features_output, out.str());
      });
    } else if (*similarity) {
      stage("similarity", similarity_input, [&] {
        std::ifstream in(similarity_input);
        const auto embedding = read_embedding_csv(in);
        const auto distances = l1_distances(embedding.values);
        const auto s = to_similarity(distances);
        if (s.degenerate) std::cerr << "warning: all embeddings are identical; similarity is zero\n";
        if (similarity_output == "-") {
          write_matrix_csv(std::cout, s.values, embedding.node_labels);
        } else {
          write_matrix_file(similarity_output, s.values, embedding.node_labels);
        }
        if (!similarity_binary.empty()) write_matrix_file(similarity_binary, s.values, embedding.node_labels);
        if (!distance_output.empty()) write_matrix_file(distance_output, distances, embedding.node_labels);
      });
    } else if (*cluster) {
      stage("cluster", cluster_input, [&] {
        std::vector<std::string> labels;
        const auto s = read_matrix_file(cluster_input, labels);
        const auto cfg = cluster_options.config();
        const auto clustering = cluster_once(s, cluster_m, cfg);
        std::ostringstream out;
        write_clustering_csv(out, clustering, labels);
        write_output(cluster_output, out.str());
        if (!dendrogram_output.empty()) {
          if (cfg.algorithm != Algorithm::Agglomerative) throw Error("--dendrogram needs --algorithm agglomerative");
          std::ostringstream merges;
          write_dendrogram_csv(merges, agglomerative_merges(s, cfg.linkage), labels);
          write_output(dendrogram_output, merges.str());
        }
      });
    } else if (*select) {
      stage("select-m", select_input, [&] {
        std::vector<std::string> labels;
        const auto s = read_matrix_file(select_input, labels);
        auto cfg = select_options.config();
        cfg.m_range.clear();
        for (Index m = m_min; m <= m_max; ++m) cfg.m_range.push_back(m);
        const auto selection = select_clusters(s, cfg);
        if (selection.degenerate) std::cerr << "warning: every candidate M scored zero\n";
        std::cerr << "best M = " << selection.best_num_clusters << '\n';
        if (!curve_output.empty()) {
          std::ostringstream curve;
          write_curve_csv(curve, selection);
          write_output(curve_output, curve.str());
        }
        std::ostringstream out;
        write_clustering_csv(out, selection.best, labels);
        write_output(select_output, out.str());
      });
    } else if (*prof) {
      EmbeddingMatrix embedding;
      stage("profile", profile_embedding, [&] {
        std::ifstream in(profile_embedding);
        embedding = read_embedding_csv(in);
      });
      stage("profile", profile_clustering, [&] {
        std::ifstream in(profile_clustering);
        std::vector<std::string> labels;
        auto clustering = read_clustering_csv(in, labels);
        // Clusterings computed from a binary similarity file are labeled by node index.
        try {
          clustering = align_clustering(clustering, labels, embedding.node_labels);
        } catch (const Error&) {
          if (!is_index_labeling(labels)) throw;
        }
        if (clustering.size() != embedding.num_nodes())
          throw Error("clustering has " + std::to_string(clustering.size()) + " nodes, embedding has " +
                      std::to_string(embedding.num_nodes()));
        const auto profiles = label(profile(embedding, clustering), embedding.layer_names, thresholds);
        write_output(profile_output, profile_report(profiles, embedding, thresholds).dump(2) + "\n");
        if (!bars_output.empty()) {
          std::ostringstream bars;
          write_profile_bars_csv(bars, profiles, embedding);
          write_output(bars_output, bars.str());
        }
      });
    } else if (*run) {
      PipelineConfig cfg;
      stage("config", run_config, [&] { cfg = PipelineConfig::load(run_config); });
      if (!run_output.empty()) cfg.output_dir = run_output;
      if (run_threads > 0) cfg.threads = run_threads;
      const auto summary = run_pipeline(cfg);
      std::cerr << "best M = " << summary.best_num_clusters << "; " << summary.artifacts.size()
                << " artifacts in " << cfg.output_dir.string() << '\n';
      for (const auto& [m, ari] : summary.ari_by_m) std::cerr << "  ARI at M = " << m << ": " << ari << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "rolenet: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
