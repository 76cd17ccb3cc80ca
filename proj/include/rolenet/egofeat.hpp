#pragma once

#include "rolenet/graph.hpp"
#include "rolenet/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace rolenet {

/// Walk counts per order. Row k-1 of `in` / `out` holds the order-k counts for
/// every node (columns), i.e. 1^T A^k and (A^k 1)^T.
template <typename Scalar>
struct WalkCounts {
  Matrix<Scalar> in;
  Matrix<Scalar> out;

  int max_order() const { return static_cast<int>(in.rows()); }
};

namespace detail {

/// Elementwise numerator / denominator with 0/0 := 0. A zero denominator under
/// a positive numerator means a longer walk exists without its prefix.
template <typename Scalar>
RowVector<Scalar> serial_ratio(const RowVector<Scalar>& numerator,
                               const RowVector<Scalar>& denominator) {
  RowVector<Scalar> result(numerator.size());
  for (Index i = 0; i < numerator.size(); ++i) {
    if (denominator(i) == Scalar(0)) {
      if (numerator(i) != Scalar(0))
        throw InvariantError("walk count is positive where its prefix count is zero (node " +
                             std::to_string(i) + ")");
      result(i) = Scalar(0);
    } else {
      result(i) = numerator(i) / denominator(i);
    }
  }
  return result;
}

}  // namespace detail

/// Order 1..max_order in/out walk counts of one adjacency matrix, by iterated
/// vector-matrix products.
template <typename Derived>
WalkCounts<typename Derived::Scalar> raw_walk_counts(const Eigen::MatrixBase<Derived>& adjacency,
                                                     int max_order) {
  using Scalar = typename Derived::Scalar;
  if (max_order < 1) throw Error("maximum walk order must be >= 1");
  if (adjacency.rows() != adjacency.cols()) throw Error("adjacency matrix must be square");
  const Index n = adjacency.rows();
  WalkCounts<Scalar> counts{Matrix<Scalar>(max_order, n), Matrix<Scalar>(max_order, n)};
  RowVector<Scalar> in_walks = RowVector<Scalar>::Ones(n);
  Vector<Scalar> out_walks = Vector<Scalar>::Ones(n);
  for (int k = 0; k < max_order; ++k) {
    in_walks = in_walks * adjacency;
    out_walks = adjacency * out_walks;
    counts.in.row(k) = in_walks;
    counts.out.row(k) = out_walks.transpose();
  }
  return counts;
}

/// Order 1 unchanged; order k >= 2 divided elementwise by order k-1.
template <typename Scalar>
WalkCounts<Scalar> normalize_serial(const WalkCounts<Scalar>& raw) {
  if (raw.in.rows() != raw.out.rows() || raw.in.cols() != raw.out.cols())
    throw Error("in and out counts disagree in shape");
  WalkCounts<Scalar> normalized = raw;
  for (Index k = 1; k < raw.in.rows(); ++k) {
    normalized.in.row(k) = detail::serial_ratio<Scalar>(raw.in.row(k), raw.in.row(k - 1));
    normalized.out.row(k) = detail::serial_ratio<Scalar>(raw.out.row(k), raw.out.row(k - 1));
  }
  return normalized;
}

/// Cross-layer walk orders (k, k') with k, k' >= 1 and k + k' <= max_order,
/// grouped by total length, longer first-layer leg first:
/// (1,1), (2,1), (1,2), (3,1), (2,2), (1,3), ...
inline std::vector<std::pair<int, int>> between_layer_orders(int max_order) {
  std::vector<std::pair<int, int>> orders;
  for (int total = 2; total <= max_order; ++total) {
    for (int k = total - 1; k >= 1; --k) orders.emplace_back(k, total - k);
  }
  return orders;
}

/// Walks of k steps in the first layer followed by k' steps in the second.
/// Row r corresponds to `orders[r]`.
template <typename Scalar>
struct PairCounts {
  std::vector<std::pair<int, int>> orders;
  Matrix<Scalar> in;
  Matrix<Scalar> out;
};

/// Raw counts 1^T A^k B^k' (in) and A^k B^k' 1 (out).
template <typename DerivedA, typename DerivedB>
PairCounts<typename DerivedA::Scalar> raw_between_layer_counts(
    const Eigen::MatrixBase<DerivedA>& first, const Eigen::MatrixBase<DerivedB>& second,
    int max_order) {
  using Scalar = typename DerivedA::Scalar;
  if (max_order < 2) throw Error("between-layer walks need maximum order >= 2");
  const Index n = first.rows();
  if (first.cols() != n || second.rows() != n || second.cols() != n)
    throw Error("layer adjacency matrices must be square and of equal size");

  PairCounts<Scalar> counts;
  counts.orders = between_layer_orders(max_order);
  const auto rows = static_cast<Index>(counts.orders.size());
  counts.in.resize(rows, n);
  counts.out.resize(rows, n);

  // first_in[k] = 1^T A^k, second_out[k'] = B^k' 1
  std::vector<RowVector<Scalar>> first_in(static_cast<std::size_t>(max_order));
  std::vector<Vector<Scalar>> second_out(static_cast<std::size_t>(max_order));
  RowVector<Scalar> row = RowVector<Scalar>::Ones(n);
  Vector<Scalar> col = Vector<Scalar>::Ones(n);
  for (int k = 1; k < max_order; ++k) {
    row = row * first;
    col = second * col;
    first_in[static_cast<std::size_t>(k)] = row;
    second_out[static_cast<std::size_t>(k)] = col;
  }
  for (Index r = 0; r < rows; ++r) {
    const auto [k, k2] = counts.orders[static_cast<std::size_t>(r)];
    RowVector<Scalar> in_walks = first_in[static_cast<std::size_t>(k)];
    for (int s = 0; s < k2; ++s) in_walks = in_walks * second;
    Vector<Scalar> out_walks = second_out[static_cast<std::size_t>(k2)];
    for (int s = 0; s < k; ++s) out_walks = first * out_walks;
    counts.in.row(r) = in_walks;
    counts.out.row(r) = out_walks.transpose();
  }
  return counts;
}

/// Serially normalized cross-layer counts. Each (k, k') count is divided by the
/// count of the same walk with one step removed: the last step for
/// out-walks, (k, k'-1), where (k, 0) is A^k 1; the first step for in-walks,
/// (k-1, k'), where (0, k') is 1^T B^k'. The (1, 1) entries stay raw, like
/// order-1 entries within a layer.
template <typename DerivedA, typename DerivedB>
PairCounts<typename DerivedA::Scalar> between_layer_counts(
    const Eigen::MatrixBase<DerivedA>& first, const Eigen::MatrixBase<DerivedB>& second,
    int max_order) {
  using Scalar = typename DerivedA::Scalar;
  const auto raw = raw_between_layer_counts(first, second, max_order);
  const auto first_walks = raw_walk_counts(first, max_order);
  const auto second_walks = raw_walk_counts(second, max_order);

  auto row_of = [&](int k, int k2) {
    for (std::size_t r = 0; r < raw.orders.size(); ++r) {
      if (raw.orders[r] == std::pair{k, k2}) return static_cast<Index>(r);
    }
    throw InvariantError("missing between-layer order");
  };

  PairCounts<Scalar> normalized = raw;
  for (Index r = 0; r < static_cast<Index>(raw.orders.size()); ++r) {
    const auto [k, k2] = raw.orders[static_cast<std::size_t>(r)];
    if (k == 1 && k2 == 1) continue;
    const RowVector<Scalar> out_prefix =
        k2 == 1 ? RowVector<Scalar>(first_walks.out.row(k - 1)) : RowVector<Scalar>(raw.out.row(row_of(k, k2 - 1)));
    const RowVector<Scalar> in_suffix =
        k == 1 ? RowVector<Scalar>(second_walks.in.row(k2 - 1)) : RowVector<Scalar>(raw.in.row(row_of(k - 1, k2)));
    normalized.out.row(r) = detail::serial_ratio<Scalar>(raw.out.row(r), out_prefix);
    normalized.in.row(r) = detail::serial_ratio<Scalar>(raw.in.row(r), in_suffix);
  }
  return normalized;
}

enum class Direction { In, Out };

/// One embedding row: direction, a single layer or an ordered layer pair, and
/// the walk order (k) or order pair (k, k').
struct FeatureSpec {
  Direction direction = Direction::In;
  std::vector<Index> layers;
  int order = 1;
  int second_order = 0;

  bool is_between() const { return layers.size() == 2; }
  int total_order() const { return order + second_order; }

  /// `<dir>_<layer>_k<order>` or `<dir>_<layer>-><layer'>_k<k>-<k'>`.
  std::string name(const std::vector<std::string>& layer_names) const;
  static FeatureSpec parse(const std::string& name, const std::vector<std::string>& layer_names);

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

/// d x N feature matrix; column i embeds node i.
struct EmbeddingMatrix {
  std::vector<FeatureSpec> features;
  Eigen::MatrixXd values;
  std::vector<std::string> node_labels;
  std::vector<std::string> layer_names;

  Index dimension() const { return values.rows(); }
  Index num_nodes() const { return values.cols(); }
  std::vector<std::string> feature_names() const;
};

struct EmbeddingOptions {
  int max_order = 3;
  bool include_between = false;
  /// log1p on every entry; exploration only.
  bool log1p = false;
  unsigned threads = 1;
};

/// Rows: per layer an in block (k = 1..K) then an out block; then, when
/// enabled, per ordered layer pair (l, l') with l != l' in lexicographic order
/// an in block then an out block over `between_layer_orders(K)`.
EmbeddingMatrix build_embedding(const MultiLayerGraph& graph, const EmbeddingOptions& options);

/// CSV with a `node` column followed by one column per feature name.
void write_embedding_csv(std::ostream& out, const EmbeddingMatrix& embedding);
EmbeddingMatrix read_embedding_csv(std::istream& in);

}  // namespace rolenet
