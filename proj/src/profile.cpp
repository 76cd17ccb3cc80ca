#include "rolenet/profile.hpp"

#include "rolenet/csv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace rolenet {

std::vector<ClusterProfile> profile(const EmbeddingMatrix& embedding, const Clustering& clustering) {
  const Index n = embedding.num_nodes();
  if (clustering.size() != n)
    throw Error("clustering has " + std::to_string(clustering.size()) + " nodes, embedding has " +
                std::to_string(n));
  const Index d = embedding.dimension();
  if (static_cast<Index>(embedding.features.size()) != d) throw Error("embedding feature descriptors do not match rows");
  const auto num_layers = embedding.layer_names.size();

  std::vector<ClusterProfile> profiles(static_cast<std::size_t>(clustering.num_clusters()));
  for (Index m = 0; m < clustering.num_clusters(); ++m) {
    auto& p = profiles[static_cast<std::size_t>(m)];
    p.cluster = m;
    p.mean_embedding = Eigen::VectorXd::Zero(d);
  }
  for (Index i = 0; i < n; ++i) {
    auto& p = profiles[static_cast<std::size_t>(clustering[i])];
    p.mean_embedding += embedding.values.col(i);
    ++p.size;
  }

  for (auto& p : profiles) {
    p.mean_embedding /= static_cast<double>(p.size);
    double in = 0, out = 0, direct = 0;
    std::vector<double> per_layer(num_layers, 0.0);
    for (Index f = 0; f < d; ++f) {
      const auto& spec = embedding.features[static_cast<std::size_t>(f)];
      const double v = p.mean_embedding(f);
      (spec.direction == Direction::In ? in : out) += v;
      if (!spec.is_between() && spec.order == 1) direct += v;
      for (Index layer : spec.layers) per_layer[static_cast<std::size_t>(layer)] += v / static_cast<double>(spec.layers.size());
    }
    p.connectivity = p.mean_embedding.sum();
    p.funding_balance = in + out > 0 ? (out - in) / (out + in) : 0.0;
    const double total = std::accumulate(per_layer.begin(), per_layer.end(), 0.0);
    p.segment_shares.assign(num_layers, 0.0);
    if (total > 0) {
      for (std::size_t l = 0; l < num_layers; ++l) p.segment_shares[l] = per_layer[l] / total;
    }
    p.counterparty_access = p.connectivity > 0 ? direct / p.connectivity : 0.0;
  }
  return profiles;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double position = q * static_cast<double>(values.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const auto upper = std::min(lower + 1, values.size() - 1);
  const double fraction = position - static_cast<double>(lower);
  return values[lower] + fraction * (values[upper] - values[lower]);
}

namespace {

std::string tercile_label(double value, double low_cut, double high_cut, const char* low, const char* mid,
                          const char* high) {
  if (value <= low_cut) return low;
  if (value > high_cut) return high;
  return mid;
}

}  // namespace

std::vector<ClusterProfile> label(std::vector<ClusterProfile> profiles, const std::vector<std::string>& layer_names,
                                  const LabelThresholds& thresholds) {
  if (profiles.empty()) return profiles;
  std::vector<double> connectivity, access;
  for (const auto& p : profiles) {
    connectivity.push_back(p.connectivity);
    access.push_back(p.counterparty_access);
  }
  const double conn_low = quantile(connectivity, 1.0 / 3.0);
  const double conn_high = quantile(connectivity, 2.0 / 3.0);
  const double access_low = quantile(access, 1.0 / 3.0);
  const double access_high = quantile(access, 2.0 / 3.0);

  for (auto& p : profiles) {
    p.connectivity_label =
        tercile_label(p.connectivity, conn_low, conn_high, labels::kPeripheral, labels::kMidTier, labels::kSystemic);
    p.access_label = tercile_label(p.counterparty_access, access_low, access_high, labels::kIndirect,
                                   labels::kSemiDirect, labels::kDirect);
    if (std::abs(p.funding_balance) <= thresholds.intermediation_max_balance) {
      p.funding_label = labels::kIntermediation;
    } else {
      p.funding_label = p.funding_balance > 0 ? labels::kSupplier : labels::kConsumer;
    }
    p.segment_layer.clear();
    const auto top = std::max_element(p.segment_shares.begin(), p.segment_shares.end());
    if (top == p.segment_shares.end() || *top == 0.0) {
      p.segment_label = labels::kNoActivity;
    } else if (*top >= thresholds.specialism_min_share) {
      p.segment_label = labels::kSpecialism;
      p.segment_layer = layer_names.at(static_cast<std::size_t>(top - p.segment_shares.begin()));
    } else {
      p.segment_label = labels::kCrossSegment;
    }
  }
  return profiles;
}

nlohmann::json profile_report(const std::vector<ClusterProfile>& profiles, const EmbeddingMatrix& embedding,
                              const LabelThresholds& thresholds) {
  nlohmann::json report;
  report["thresholds"] = {{"connectivity", "terciles across clusters"},
                          {"counterparty_access", "terciles across clusters"},
                          {"intermediation_max_abs_balance", thresholds.intermediation_max_balance},
                          {"specialism_min_layer_share", thresholds.specialism_min_share}};
  report["layers"] = embedding.layer_names;
  report["features"] = embedding.feature_names();
  report["clusters"] = nlohmann::json::array();
  for (const auto& p : profiles) {
    nlohmann::json shares = nlohmann::json::object();
    for (std::size_t l = 0; l < p.segment_shares.size(); ++l) shares[embedding.layer_names[l]] = p.segment_shares[l];
    nlohmann::json segment{{"label", p.segment_label}};
    if (!p.segment_layer.empty()) segment["layer"] = p.segment_layer;
    report["clusters"].push_back({
        {"id", p.cluster},
        {"size", p.size},
        {"scores",
         {{"connectivity", p.connectivity},
          {"funding_balance", p.funding_balance},
          {"segment_shares", shares},
          {"counterparty_access", p.counterparty_access}}},
        {"labels",
         {{"connectivity", p.connectivity_label},
          {"funding_balance", p.funding_label},
          {"segment_balance", segment},
          {"counterparty_access", p.access_label}}},
        {"mean_embedding", std::vector<double>(p.mean_embedding.data(), p.mean_embedding.data() + p.mean_embedding.size())},
    });
  }
  return report;
}

void write_profile_bars_csv(std::ostream& out, const std::vector<ClusterProfile>& profiles,
                            const EmbeddingMatrix& embedding) {
  const auto names = embedding.feature_names();
  out << "cluster,feature_name,mean_value\n";
  for (const auto& p : profiles) {
    for (Index f = 0; f < p.mean_embedding.size(); ++f) {
      out << p.cluster << ',' << csv::escape(names[static_cast<std::size_t>(f)]) << ','
          << csv::format_double(p.mean_embedding(f)) << '\n';
    }
  }
}

}  // namespace rolenet
