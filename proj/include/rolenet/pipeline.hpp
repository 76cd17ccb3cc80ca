#pragma once

#include "rolenet/agglomerative.hpp"
#include "rolenet/egofeat.hpp"
#include "rolenet/graph.hpp"
#include "rolenet/objective.hpp"
#include "rolenet/profile.hpp"
#include "rolenet/spectral.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rolenet {

inline constexpr const char* kVersion = "0.1.0";

/// Failure in a named pipeline stage, carrying the input it was reading.
class StageError : public Error {
 public:
  StageError(std::string stage, std::filesystem::path input, const std::string& what)
      : Error("stage '" + stage + "' failed" + (input.empty() ? "" : " on '" + input.string() + "'") + ": " + what),
        stage_(std::move(stage)),
        input_(std::move(input)) {}
  const std::string& stage() const noexcept { return stage_; }
  const std::filesystem::path& input() const noexcept { return input_; }

 private:
  std::string stage_;
  std::filesystem::path input_;
};

enum class Algorithm { Spectral, Agglomerative };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);

/// End-to-end run settings. Defaults: K = 3,
/// M = 2..11, 500 k-means restarts, normalized Laplacian, volume kappa.
struct PipelineConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> planted;
  std::vector<std::string> layers;
  int max_order = 3;
  bool include_between = false;
  bool log1p = false;
  std::string distance = "l1";
  KappaMode kappa = KappaMode::Volume;
  Algorithm algorithm = Algorithm::Spectral;
  LaplacianMode laplacian = LaplacianMode::Normalized;
  LinkageMode linkage = LinkageMode::Average;
  std::vector<Index> m_range = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  int restarts = 500;
  int kmeans_max_iter = 300;
  double kmeans_tol = 1e-8;
  KMeansInit kmeans_init = KMeansInit::Uniform;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  /// Worker cap; 0 means ROLENET_THREADS or hardware concurrency. Never
  /// affects results, so it is not written to the manifest.
  unsigned threads = 0;

  unsigned thread_count() const { return threads > 0 ? threads : default_thread_count(); }

  /// Accepts a config document or a run manifest (reads its "config" key).
  /// Relative paths resolve against `base_dir`.
  static PipelineConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);
  /// Everything needed to reproduce the artifacts (no output directory or thread cap).
  nlohmann::json to_json() const;
};

struct RunSummary {
  Index num_nodes = 0;
  Index num_layers = 0;
  Index best_num_clusters = 0;
  std::vector<std::filesystem::path> artifacts;
  /// ARI against planted roles for every M, when a planted file was given.
  std::vector<std::pair<Index, double>> ari_by_m;
};

/// Runs ingest, features, similarity, model selection, profiling and writes
/// all artifacts plus manifest.json to `cfg.output_dir`.
RunSummary run_pipeline(const PipelineConfig& cfg);

// Clustering CSV: `node_label,cluster_id`.
void write_clustering_csv(std::ostream& out, const Clustering& clustering, const std::vector<std::string>& labels);
Clustering read_clustering_csv(std::istream& in, std::vector<std::string>& labels);

/// `M,phi_within`
void write_curve_csv(std::ostream& out, const ModelSelection<double>& selection);

/// `step,cluster_a,cluster_b,linkage_value`
void write_dendrogram_csv(std::ostream& out, const std::vector<Merge<double>>& merges,
                          const std::vector<std::string>& labels);

/// Reorders `clustering` (given for `from_labels`) to the node order of `to_labels`.
Clustering align_clustering(const Clustering& clustering, const std::vector<std::string>& from_labels,
                            const std::vector<std::string>& to_labels);

/// Clustering for fixed M with the configured algorithm.
Clustering cluster_once(const Eigen::MatrixXd& similarity, Index num_clusters, const PipelineConfig& cfg);

/// Model selection over cfg.m_range with the configured algorithm.
ModelSelection<double> select_clusters(const Eigen::MatrixXd& similarity, const PipelineConfig& cfg);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rolenet
