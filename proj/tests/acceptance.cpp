// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "rolenet/pipeline.hpp"
#include "rolenet/proxsim.hpp"
#include "rolenet/synth.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace rolenet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = check();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!outcome.pass) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof(timing), "%.2fs", seconds);
  std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << " (" << timing << "): "
            << outcome.detail << std::endl;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Instance {
  std::vector<Eigen::MatrixXd> layers;
};

// 50 digraphs, N in 3..10, densities cycling 0.1 / 0.3 / 0.5, one or two layers.
std::vector<Instance> walk_corpus() {
  std::mt19937_64 rng(20240101);
  const double densities[] = {0.1, 0.3, 0.5};
  std::vector<Instance> corpus;
  for (int i = 0; i < 50; ++i) {
    const Index n = 3 + i % 8;
    const double density = densities[i % 3];
    Instance inst;
    const int layers = 1 + (i / 3) % 2;
    for (int l = 0; l < layers; ++l) inst.layers.push_back(oracle::random_digraph(n, density, rng));
    corpus.push_back(std::move(inst));
  }
  return corpus;
}

constexpr int kOrder = 3;

Outcome walk_count_oracle() {
  const auto start = std::chrono::steady_clock::now();
  long checked = 0, mismatched = 0;
  for (const auto& inst : walk_corpus()) {
    for (const auto& a : inst.layers) {
      const auto w = raw_walk_counts(a, kOrder);
      for (Index i = 0; i < a.rows(); ++i)
        for (int k = 1; k <= kOrder; ++k) {
          mismatched += w.out(k - 1, i) != oracle::dfs_out(a, k, i);
          mismatched += w.in(k - 1, i) != oracle::dfs_in(a, k, i);
          checked += 2;
        }
    }
    if (inst.layers.size() == 2) {
      for (int dir = 0; dir < 2; ++dir) {
        const auto& a = inst.layers[dir], &b = inst.layers[1 - dir];
        const auto p = raw_between_layer_counts(a, b, kOrder);
        for (std::size_t r = 0; r < p.orders.size(); ++r) {
          const auto [k, k2] = p.orders[r];
          for (Index i = 0; i < a.rows(); ++i) {
            mismatched += p.out(static_cast<Index>(r), i) != oracle::dfs_pair_out(a, b, k, k2, i);
            mismatched += p.in(static_cast<Index>(r), i) != oracle::dfs_pair_in(a, b, k, k2, i);
            checked += 2;
          }
        }
      }
    }
  }
  const double seconds = elapsed_since(start);
  return {mismatched == 0 && seconds < 10,
          std::to_string(checked) + " counts vs DFS, " + std::to_string(mismatched) + " mismatches"};
}

Outcome normalization_law() {
  long checked = 0, violations = 0;
  for (const auto& inst : walk_corpus()) {
    for (const auto& a : inst.layers) {
      const auto raw = raw_walk_counts(a, kOrder);
      const auto norm = normalize_serial(raw);  // throws InvariantError on a violated prefix law
      for (const auto* pair : {&raw.in, &raw.out}) {
        const auto& r = *pair;
        const auto& n = pair == &raw.in ? norm.in : norm.out;
        for (Index i = 0; i < r.cols(); ++i) {
          violations += n(0, i) != r(0, i);
          for (Index k = 1; k < kOrder; ++k) {
            const double expected = r(k - 1, i) > 0 ? r(k, i) / r(k - 1, i) : 0.0;
            violations += r(k - 1, i) == 0 && r(k, i) != 0;
            violations += n(k, i) != expected;
            ++checked;
          }
        }
      }
    }
  }
  return {violations == 0, std::to_string(checked) + " normalized entries exact, " + std::to_string(violations) +
                               " violations, no invariant errors"};
}

Outcome duality_identity() {
  std::mt19937_64 rng(77);
  double worst = 0;
  for (int s = 0; s < 100; ++s) {
    const auto sim = oracle::random_similarity(12, rng);
    for (int c = 0; c < 100; ++c) {
      const Index m = 1 + (c % 6);
      const auto clustering = oracle::random_clustering(12, m, rng);
      const double total = phi_within(sim, clustering, KappaMode::Volume) + phi_between(sim, clustering, KappaMode::Volume);
      worst = std::max(worst, std::abs(total - static_cast<double>(m)));
    }
  }
  std::ostringstream d;
  d << "10000 (S, clustering) pairs, max |error| = " << worst;
  return {worst < 1e-9, d.str()};
}

Outcome oracle_near_optimality() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4242);
  int good = 0;
  double worst_ratio = 1;
  for (int i = 0; i < 50; ++i) {
    const Index n = 5 + i % 5;
    const auto s = oracle::random_similarity(n, rng);
    const double best = phi_within(s, brute_force_best(s, 2, KappaMode::Volume), KappaMode::Volume);
    SpectralConfig cfg;
    cfg.num_clusters = 2;
    cfg.restarts = 500;
    cfg.seed = static_cast<std::uint64_t>(i);
    cfg.threads = default_thread_count();
    const double got = spectral_cluster(s, cfg).phi_within;
    const double ratio = got / best;
    worst_ratio = std::min(worst_ratio, ratio);
    good += ratio >= 0.95;
  }
  const double seconds = elapsed_since(start);
  std::ostringstream d;
  d << good << "/50 instances within 95% of brute force (worst ratio " << worst_ratio << ")";
  return {good >= 45 && seconds < 120, d.str()};
}

Outcome planted_role_recovery() {
  const auto start = std::chrono::steady_clock::now();
  int peaked = 0, recovered = 0;
  double worst_ari = 1;
  std::ostringstream picks;
  std::vector<Index> range;
  for (Index m = 2; m <= 11; ++m) range.push_back(m);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto synth = generate(preset("six-role", seed));
    EmbeddingOptions options;
    options.max_order = 3;
    const auto embedding = build_embedding(synth.graph, options);
    const auto s = to_similarity(l1_distances(embedding.values));
    SpectralConfig cfg;
    cfg.restarts = 500;
    cfg.seed = seed;
    cfg.threads = default_thread_count();
    const auto selection = select_m_spectral(s.values, range, cfg, KappaMode::Volume);
    const bool in_band = selection.best_num_clusters >= 5 && selection.best_num_clusters <= 7;
    peaked += in_band && selection.best_num_clusters == 6;
    picks << selection.best_num_clusters << (seed < 20 ? "," : "");
    for (const auto& point : selection.curve) {
      if (point.num_clusters != 6) continue;
      const double ari = adjusted_rand_index(point.clustering.assignment(), synth.planted);
      worst_ari = std::min(worst_ari, ari);
      recovered += ari >= 0.9;
    }
  }
  const double seconds = elapsed_since(start);
  std::ostringstream d;
  d << "argmax M = 6 in " << peaked << "/20 seeds, ARI(M=6) >= 0.9 in " << recovered << "/20 (min "
    << worst_ari << "); picks [" << picks.str() << "]";
  return {peaked >= 16 && recovered == 20 && seconds < 300, d.str()};
}

Outcome noiseless_core_periphery() {
  const auto synth = generate(preset("core-periphery-noiseless", 0));
  const auto embedding = build_embedding(synth.graph, {});
  const auto s = to_similarity(l1_distances(embedding.values));
  SpectralConfig cfg;
  cfg.num_clusters = 4;
  cfg.restarts = 500;
  cfg.threads = default_thread_count();
  const auto result = spectral_cluster(s.values, cfg);
  const double ari = adjusted_rand_index(result.clustering.assignment(), synth.planted);
  std::ostringstream d;
  d << "ARI = " << ari << " at M = 4";
  return {ari == 1.0, d.str()};
}

Outcome agglomerative_reference() {
  std::mt19937_64 rng(31337);
  int identical = 0;
  for (int i = 0; i < 30; ++i) {
    const auto s = oracle::random_similarity(8, rng);
    bool all = true;
    for (auto linkage : {LinkageMode::Single, LinkageMode::Complete, LinkageMode::Average}) {
      const auto fast = agglomerative_merges(s, linkage);
      const auto slow = oracle::naive_agglomerative(s, linkage);
      all = all && fast.size() == slow.size();
      for (std::size_t k = 0; all && k < fast.size(); ++k)
        all = fast[k].cluster_a == slow[k].a && fast[k].cluster_b == slow[k].b &&
              std::abs(fast[k].linkage - slow[k].linkage) <= 1e-12 * std::max(1.0, std::abs(slow[k].linkage));
    }
    identical += all;
  }
  return {identical == 30, std::to_string(identical) + "/30 matrices match under single, complete and average"};
}

Index count_components(const Eigen::MatrixXd& s) {
  const Index n = s.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  Index components = 0;
  for (Index root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    ++components;
    std::vector<Index> stack{root};
    seen[static_cast<std::size_t>(root)] = true;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index w = 0; w < n; ++w)
        if (s(v, w) != 0 && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
    }
  }
  return components;
}

Outcome spectral_sanity() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> num_blocks(1, 5), block_size(1, 6);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  int ok = 0;
  double lowest = 0;
  for (int i = 0; i < 20; ++i) {
    std::vector<Index> sizes;
    for (int b = num_blocks(rng); b > 0; --b) sizes.push_back(block_size(rng));
    Index n = 0;
    for (Index sz : sizes) n += sz;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    Index offset = 0;
    for (Index sz : sizes) {
      for (Index a = offset; a < offset + sz; ++a)
        for (Index b = a + 1; b < offset + sz; ++b) s(a, b) = s(b, a) = weight(rng);
      offset += sz;
    }
    // random relabeling so blocks are not contiguous
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + n, rng);
    s = perm * s * perm.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian(s, LaplacianMode::Unnormalized));
    const auto& values = eig.eigenvalues();
    lowest = std::min(lowest, values.minCoeff());
    const Index zeros = (values.array().abs() < 1e-8).count();
    ok += values.minCoeff() > -1e-8 && zeros == count_components(s);
  }
  std::ostringstream d;
  d << ok << "/20 block matrices: PSD and zero multiplicity = component count (min eigenvalue " << lowest << ")";
  return {ok == 20, d.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct SixRoleRun {
  fs::path root;
  SynthResult synth;
  RunSummary summary;
};

// Six-role preset, seed 7, through the full pipeline.
SixRoleRun& six_role_run() {
  static SixRoleRun run = [] {
    SixRoleRun r{fs::temp_directory_path() / "rolenet_acceptance", generate(preset("six-role", 7)), {}};
    fs::remove_all(r.root);
    std::ostringstream edges, planted;
    write_edge_csv(edges, r.synth.graph);
    write_planted_csv(planted, r.synth);
    write_text_file(r.root / "edges.csv", edges.str());
    write_text_file(r.root / "planted.csv", planted.str());
    PipelineConfig cfg;
    cfg.input = r.root / "edges.csv";
    cfg.planted = r.root / "planted.csv";
    cfg.seed = 7;
    cfg.threads = 1;
    cfg.output_dir = r.root / "threads1";
    r.summary = run_pipeline(cfg);
    return r;
  }();
  return run;
}

Outcome determinism() {
  auto& run = six_role_run();
  auto cfg = PipelineConfig::load(run.root / "threads1" / "manifest.json");
  cfg.threads = 4;
  cfg.output_dir = run.root / "threads4";
  run_pipeline(cfg);
  int files = 0, identical = 0;
  for (const auto& entry : fs::directory_iterator(run.root / "threads1")) {
    ++files;
    const auto other = run.root / "threads4" / entry.path().filename();
    identical += fs::exists(other) && slurp(entry.path()) == slurp(other);
  }
  std::ostringstream d;
  d << identical << "/" << files << " artifacts byte-identical between 1 and 4 threads";
  return {files > 0 && identical == files, d.str()};
}

Outcome profile_labels() {
  auto& run = six_role_run();
  std::ifstream in(run.root / "threads1" / "clustering.csv");
  std::vector<std::string> labels;
  const auto clustering = read_clustering_csv(in, labels);
  const auto report = nlohmann::json::parse(slurp(run.root / "threads1" / "profile.json"));

  // cluster holding the majority of a planted role
  auto cluster_of = [&](const std::string& role) {
    const auto role_index = static_cast<Index>(
        std::find(run.synth.role_names.begin(), run.synth.role_names.end(), role) - run.synth.role_names.begin());
    std::map<Index, int> votes;
    for (Index i = 0; i < clustering.size(); ++i) {
      const auto node = run.synth.graph.find_node(labels[static_cast<std::size_t>(i)]);
      if (node && run.synth.planted[static_cast<std::size_t>(*node)] == role_index) ++votes[clustering[i]];
    }
    return std::max_element(votes.begin(), votes.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
  };
  const auto supplier = report["clusters"][static_cast<std::size_t>(cluster_of(six_role::kUnsecuredSupplier))]["labels"];
  const auto bridge = report["clusters"][static_cast<std::size_t>(cluster_of(six_role::kSystemicBridge))]["labels"];

  const bool supplier_ok = supplier["funding_balance"] == labels::kSupplier &&
                           supplier["segment_balance"]["label"] == labels::kSpecialism &&
                           supplier["connectivity"] == labels::kPeripheral;
  const bool bridge_ok = bridge["funding_balance"] == labels::kIntermediation &&
                         bridge["segment_balance"]["label"] == labels::kCrossSegment;
  std::ostringstream d;
  d << "M = " << run.summary.best_num_clusters << "; supplier: " << supplier["funding_balance"].get<std::string>()
    << " / " << supplier["segment_balance"]["label"].get<std::string>();
  if (supplier["segment_balance"].contains("layer")) d << " (" << supplier["segment_balance"]["layer"].get<std::string>() << ")";
  d << " / " << supplier["connectivity"].get<std::string>() << "; bridge: "
    << bridge["funding_balance"].get<std::string>() << " / " << bridge["segment_balance"]["label"].get<std::string>();
  return {supplier_ok && bridge_ok, d.str()};
}

}  // namespace

int main() {
  report(1, "walk-count oracle", walk_count_oracle);
  report(2, "normalization law", normalization_law);
  report(3, "duality identity", duality_identity);
  report(4, "oracle near-optimality", oracle_near_optimality);
  report(5, "planted-role recovery", planted_role_recovery);
  report(6, "noiseless core-periphery", noiseless_core_periphery);
  report(7, "agglomerative reference equivalence", agglomerative_reference);
  report(8, "spectral sanity", spectral_sanity);
  report(9, "determinism across thread caps", determinism);
  report(10, "profile labels", profile_labels);
  fs::remove_all(fs::temp_directory_path() / "rolenet_acceptance");
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
