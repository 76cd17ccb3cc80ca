#include "rolenet/synth.hpp"

#include "rolenet/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>

namespace rolenet {

Index SynthSpec::num_nodes() const {
  Index n = 0;
  for (const auto& r : roles) n += r.size;
  return n;
}

std::vector<Eigen::MatrixXd> SynthSpec::block_probabilities() const {
  const auto num_roles = static_cast<Index>(roles.size());
  std::map<std::string, Index> role_index;
  for (Index r = 0; r < num_roles; ++r) {
    if (!role_index.emplace(roles[static_cast<std::size_t>(r)].name, r).second)
      throw Error("duplicate role name '" + roles[static_cast<std::size_t>(r)].name + "'");
  }
  std::map<std::string, Index> layer_index;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (!layer_index.emplace(layers[l], static_cast<Index>(l)).second)
      throw Error("duplicate layer name '" + layers[l] + "'");
  }

  // NaN marks an unset block.
  std::vector<Eigen::MatrixXd> blocks(layers.size(),
                                      Eigen::MatrixXd::Constant(num_roles, num_roles, std::nan("")));
  auto set = [&](const std::string& layer, Index src, Index dst, double p) {
    auto lit = layer_index.find(layer);
    if (lit == layer_index.end()) throw Error("unknown layer '" + layer + "' in role template");
    if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability " + std::to_string(p) + " outside [0, 1]");
    double& cell = blocks[static_cast<std::size_t>(lit->second)](src, dst);
    if (!std::isnan(cell) && cell != p)
      throw Error("conflicting probabilities for block " + roles[static_cast<std::size_t>(src)].name +
                  " -> " + roles[static_cast<std::size_t>(dst)].name + " in layer '" + layer + "'");
    cell = p;
  };
  auto role_of = [&](const std::string& name) {
    auto it = role_index.find(name);
    if (it == role_index.end()) throw Error("unknown role '" + name + "' in role template");
    return it->second;
  };
  for (Index r = 0; r < num_roles; ++r) {
    const auto& role = roles[static_cast<std::size_t>(r)];
    if (role.size < 1) throw Error("role '" + role.name + "' must have at least one node");
    for (const auto& [layer, targets] : role.out) {
      for (const auto& [target, p] : targets) set(layer, r, role_of(target), p);
    }
    for (const auto& [layer, sources] : role.in) {
      for (const auto& [source, p] : sources) set(layer, role_of(source), r, p);
    }
  }
  for (auto& b : blocks) b = b.unaryExpr([](double p) { return std::isnan(p) ? 0.0 : p; });
  return blocks;
}

SynthResult generate(const SynthSpec& spec) {
  const auto blocks = spec.block_probabilities();
  const Index n = spec.num_nodes();
  std::vector<Index> planted;
  std::vector<std::string> labels;
  std::vector<std::string> role_names;
  const int width = std::max(3, static_cast<int>(std::to_string(n).size()));
  for (std::size_t r = 0; r < spec.roles.size(); ++r) {
    role_names.push_back(spec.roles[r].name);
    for (Index k = 0; k < spec.roles[r].size; ++k) {
      const auto id = std::to_string(planted.size());
      labels.push_back("n" + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(id.size(), width), '0') + id);
      planted.push_back(static_cast<Index>(r));
    }
  }

  std::vector<Eigen::MatrixXd> layers;
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(l)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double p = blocks[l](planted[static_cast<std::size_t>(i)], planted[static_cast<std::size_t>(j)]);
        if (uniform(rng) < p) a(i, j) = 1.0;
      }
    }
    layers.push_back(std::move(a));
  }
  return {MultiLayerGraph(std::move(labels), spec.layers, std::move(layers)), std::move(planted),
          std::move(role_names)};
}

namespace {

RoleTemplate role(std::string name, Index size,
                  std::map<std::string, std::map<std::string, double>> out) {
  return {std::move(name), size, std::move(out), {}};
}

SynthSpec core_periphery(bool noiseless, std::uint64_t seed) {
  const double core = noiseless ? 1.0 : 0.8;
  const double tier = noiseless ? 1.0 : 0.5;
  const double periphery = noiseless ? 1.0 : 0.3;
  SynthSpec spec;
  spec.layers = {"layer"};
  spec.seed = seed;
  spec.roles = {
      role("core", 10, {{"layer", {{"core", core}, {"first_tier", tier}}}}),
      role("first_tier", 20, {{"layer", {{"core", tier}, {"receiving_periphery", periphery}}}}),
      role("sending_periphery", 20, {{"layer", {{"first_tier", periphery}}}}),
      role("receiving_periphery", 20, {}),
  };
  return spec;
}

// Six roles across a secured and an unsecured layer, patterned on the
// qualitative role table of money-market clusterings. Blocks are either dense
// or empty so each role has a tight walk-count signature.
SynthSpec six_roles(std::uint64_t seed) {
  using namespace six_role;
  constexpr double dense = 0.9;
  SynthSpec spec;
  spec.layers = {"secured", "unsecured"};
  spec.seed = seed;
  spec.roles = {
      role(kSystemicIntermediary, 12,
           {{"secured", {{kSystemicIntermediary, dense}, {kSecuredSemiDirect, dense}}},
            {"unsecured", {{kSystemicIntermediary, dense}, {kSystemicBridge, dense}}}}),
      role(kSecuredIndirect, 44, {{"secured", {{kSystemicIntermediary, dense}}}}),
      role(kCrossSegmentMidTier, 36, {{"secured", {{kSystemicBridge, dense}}}}),
      role(kSecuredSemiDirect, 38, {{"secured", {{kSystemicBridge, dense}}}}),
      role(kSystemicBridge, 20,
           {{"secured", {{kSystemicIntermediary, dense}}},
            {"unsecured", {{kSystemicIntermediary, dense}, {kCrossSegmentMidTier, dense}}}}),
      role(kUnsecuredSupplier, 50, {{"unsecured", {{kCrossSegmentMidTier, 0.3}}}}),
  };
  return spec;
}

}  // namespace

std::vector<std::string> preset_names() { return {"core-periphery", "core-periphery-noiseless", "six-role"}; }

SynthSpec preset(const std::string& name, std::uint64_t seed) {
  if (name == "core-periphery") return core_periphery(false, seed);
  if (name == "core-periphery-noiseless") return core_periphery(true, seed);
  if (name == "six-role") return six_roles(seed);
  throw Error("unknown preset '" + name + "'");
}

nlohmann::json to_json(const SynthSpec& spec) {
  nlohmann::json doc;
  doc["layers"] = spec.layers;
  doc["seed"] = spec.seed;
  doc["roles"] = nlohmann::json::array();
  for (const auto& r : spec.roles) {
    nlohmann::json role{{"name", r.name}, {"size", r.size}};
    if (!r.out.empty()) role["out"] = r.out;
    if (!r.in.empty()) role["in"] = r.in;
    doc["roles"].push_back(std::move(role));
  }
  return doc;
}

SynthSpec synth_spec_from_json(const nlohmann::json& doc) {
  try {
    SynthSpec spec;
    spec.layers = doc.at("layers").get<std::vector<std::string>>();
    spec.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& r : doc.at("roles")) {
      RoleTemplate role;
      role.name = r.at("name").get<std::string>();
      role.size = r.at("size").get<Index>();
      if (r.contains("out")) role.out = r.at("out").get<decltype(role.out)>();
      if (r.contains("in")) role.in = r.at("in").get<decltype(role.in)>();
      spec.roles.push_back(std::move(role));
    }
    if (spec.layers.empty()) throw Error("synthetic spec needs at least one layer");
    if (spec.roles.empty()) throw Error("synthetic spec needs at least one role");
    spec.block_probabilities();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid synthetic spec: ") + e.what());
  }
}

void write_planted_csv(std::ostream& out, const SynthResult& result) {
  out << "node,role\n";
  for (Index i = 0; i < result.graph.num_nodes(); ++i) {
    out << csv::escape(result.graph.node_labels()[static_cast<std::size_t>(i)]) << ','
        << csv::escape(result.role_names[static_cast<std::size_t>(result.planted[static_cast<std::size_t>(i)])])
        << '\n';
  }
}

std::map<std::string, std::string> read_planted_csv(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::next_line(in, line, line_number)) throw ParseError("empty planted file");
  const auto header = csv::split(line);
  if (header.size() != 2 || header[0] != "node" || header[1] != "role")
    throw ParseError("expected header 'node,role'", line_number);
  std::map<std::string, std::string> roles;
  while (csv::next_line(in, line, line_number)) {
    const auto fields = csv::split(line);
    if (fields.size() != 2) throw ParseError("expected 2 fields", line_number);
    if (!roles.emplace(fields[0], fields[1]).second)
      throw ParseError("duplicate node '" + fields[0] + "'", line_number);
  }
  return roles;
}

double adjusted_rand_index(std::span<const Index> a, std::span<const Index> b) {
  if (a.size() != b.size())
    throw Error("partitions differ in length (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  const auto n = static_cast<double>(a.size());
  std::map<std::pair<Index, Index>, double> joint;
  std::map<Index, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  auto pairs = [](double x) { return x * (x - 1) / 2; };
  double index = 0, sum_rows = 0, sum_cols = 0;
  for (const auto& [key, count] : joint) index += pairs(count);
  for (const auto& [key, count] : rows) sum_rows += pairs(count);
  for (const auto& [key, count] : cols) sum_cols += pairs(count);
  const double total = pairs(n);
  const double expected = total > 0 ? sum_rows * sum_cols / total : 0.0;
  const double maximum = (sum_rows + sum_cols) / 2;
  if (maximum == expected) return index == maximum ? 1.0 : 0.0;
  return (index - expected) / (maximum - expected);
}

}  // namespace rolenet
