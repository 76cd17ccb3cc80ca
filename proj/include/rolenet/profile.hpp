#pragma once

#include "rolenet/egofeat.hpp"
#include "rolenet/objective.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace rolenet {

/// Scores of one cluster's average embedding along four reading dimensions.
struct ClusterProfile {
  Index cluster = 0;
  Index size = 0;
  Eigen::VectorXd mean_embedding;
  /// Sum of all mean-embedding entries.
  double connectivity = 0;
  /// (out - in) / (out + in) over the out- and in-feature sums; 0 when both vanish.
  double funding_balance = 0;
  /// Share of embedding mass per layer; between-layer features count half
  /// toward each of their two layers. All zero for an inactive cluster.
  std::vector<double> segment_shares;
  /// Order-1 (direct link) share of the total mass.
  double counterparty_access = 0;

  std::string connectivity_label;
  std::string funding_label;
  std::string segment_label;
  /// Dominant layer name when `segment_label` is a specialism, else empty.
  std::string segment_layer;
  std::string access_label;
};

struct LabelThresholds {
  /// |funding balance| at or below this reads as intermediation.
  double intermediation_max_balance = 0.25;
  /// Largest layer share at or above this reads as segment specialism.
  double specialism_min_share = 0.8;
};

namespace labels {
inline constexpr const char* kPeripheral = "Peripheral";
inline constexpr const char* kMidTier = "Mid-tier";
inline constexpr const char* kSystemic = "Systemic";
inline constexpr const char* kSupplier = "Supplier";
inline constexpr const char* kConsumer = "Consumer";
inline constexpr const char* kIntermediation = "Intermediation";
inline constexpr const char* kSpecialism = "Segment specialism";
inline constexpr const char* kCrossSegment = "Cross-segment activity";
inline constexpr const char* kNoActivity = "No activity";
inline constexpr const char* kIndirect = "Indirect";
inline constexpr const char* kSemiDirect = "Semi-direct";
inline constexpr const char* kDirect = "Direct";
}  // namespace labels

/// Scores only; labels are left empty.
std::vector<ClusterProfile> profile(const EmbeddingMatrix& embedding, const Clustering& clustering);

/// Assigns labels. Connectivity and access use terciles of the scores across
/// clusters (linear-interpolated quantiles): at or below the 1/3 quantile is
/// the low label, above the 2/3 quantile the high label.
std::vector<ClusterProfile> label(std::vector<ClusterProfile> profiles, const std::vector<std::string>& layer_names,
                                  const LabelThresholds& thresholds = {});

/// Linear-interpolated quantile of `values` at q in [0, 1].
double quantile(std::vector<double> values, double q);

nlohmann::json profile_report(const std::vector<ClusterProfile>& profiles, const EmbeddingMatrix& embedding,
                              const LabelThresholds& thresholds);

/// `cluster,feature_name,mean_value` rows for bar charts of average embeddings.
void write_profile_bars_csv(std::ostream& out, const std::vector<ClusterProfile>& profiles,
                            const EmbeddingMatrix& embedding);

}  // namespace rolenet
