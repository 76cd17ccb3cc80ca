#pragma once

#include "rolenet/graph.hpp"
#include "rolenet/objective.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rolenet {

/// A planted role: its size and, per layer, the probability of an edge from
/// one of its nodes to a node of each target role (`out`) or from a node of
/// each source role to one of its nodes (`in`). Both describe the same block
/// entry; specifying a block twice with different values is an error.
struct RoleTemplate {
  std::string name;
  Index size = 1;
  std::map<std::string, std::map<std::string, double>> out;  // layer -> target role -> p
  std::map<std::string, std::map<std::string, double>> in;   // layer -> source role -> p
};

struct SynthSpec {
  std::vector<RoleTemplate> roles;
  std::vector<std::string> layers;
  std::uint64_t seed = 0;

  Index num_nodes() const;
  /// Block edge probabilities P[layer](source role, target role).
  std::vector<Eigen::MatrixXd> block_probabilities() const;
};

struct SynthResult {
  MultiLayerGraph graph;
  /// Role index per node, aligned with graph node order.
  std::vector<Index> planted;
  std::vector<std::string> role_names;
};

/// Draws every off-diagonal directed edge independently with its block
/// probability. Layer l uses its own generator seeded from (seed, l).
SynthResult generate(const SynthSpec& spec);

/// Known presets: "core-periphery", "core-periphery-noiseless", "six-role".
SynthSpec preset(const std::string& name, std::uint64_t seed);
std::vector<std::string> preset_names();

/// Role names of the six-role preset, in planted-index order.
namespace six_role {
inline constexpr const char* kSystemicIntermediary = "systemic_cross_segment_intermediary";
inline constexpr const char* kSecuredIndirect = "secured_specialist_indirect";
inline constexpr const char* kCrossSegmentMidTier = "cross_segment_mid_tier";
inline constexpr const char* kSecuredSemiDirect = "secured_semi_direct";
inline constexpr const char* kSystemicBridge = "systemic_semi_direct_bridge";
inline constexpr const char* kUnsecuredSupplier = "unsecured_peripheral_supplier";
}  // namespace six_role

nlohmann::json to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const nlohmann::json& doc);

/// `node,role` CSV of planted roles.
void write_planted_csv(std::ostream& out, const SynthResult& result);
/// Reads `node,role`; returns node label -> role name.
std::map<std::string, std::string> read_planted_csv(std::istream& in);

/// Adjusted Rand index of two labelings of the same nodes.
double adjusted_rand_index(std::span<const Index> a, std::span<const Index> b);

}  // namespace rolenet
