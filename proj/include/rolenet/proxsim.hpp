#pragma once

#include "rolenet/types.hpp"

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rolenet {

/// Symmetric N x N similarity with zero diagonal, plus its row sums
/// (degrees). `degenerate` marks an all-zero matrix from identical embeddings.
template <typename Scalar>
struct SimilarityMatrix {
  Matrix<Scalar> values;
  Vector<Scalar> degrees;
  bool degenerate = false;

  Index size() const { return values.rows(); }
};

template <typename Derived>
SimilarityMatrix<typename Derived::Scalar> make_similarity(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  SimilarityMatrix<Scalar> s{values, {}, false};
  s.degrees = s.values.rowwise().sum();
  s.degenerate = (s.values.array() == Scalar(0)).all();
  return s;
}

/// Pairwise L1 distances between the columns of a d x N feature matrix.
/// Each unordered pair is computed once and mirrored.
template <typename Derived>
Matrix<typename Derived::Scalar> l1_distances(const Eigen::MatrixBase<Derived>& features) {
  using Scalar = typename Derived::Scalar;
  if (features.rows() < 1) throw Error("embedding has no features");
  if (!features.allFinite()) throw Error("embedding contains non-finite values");
  const Index n = features.cols();
  Matrix<Scalar> distances = Matrix<Scalar>::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const Scalar d = (features.col(i) - features.col(j)).cwiseAbs().sum();
      distances(i, j) = d;
      distances(j, i) = d;
    }
  }
  return distances;
}

/// S = D_max - D off the diagonal, zero on it. D_max is the largest
/// off-diagonal distance.
template <typename Derived>
SimilarityMatrix<typename Derived::Scalar> to_similarity(const Eigen::MatrixBase<Derived>& distances) {
  using Scalar = typename Derived::Scalar;
  if (distances.rows() != distances.cols()) throw Error("distance matrix must be square");
  if (!distances.allFinite()) throw Error("distance matrix contains non-finite values");
  const Index n = distances.rows();
  Scalar d_max = Scalar(0);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i != j) d_max = std::max(d_max, distances(i, j));
    }
  }
  Matrix<Scalar> s = (Matrix<Scalar>::Constant(n, n, d_max) - distances).eval();
  s.diagonal().setZero();
  if (d_max == Scalar(0)) s.setZero();
  return make_similarity(s);
}

enum class SymmetrizeMode { Average, Min, Max };

/// Symmetric version of an asymmetric proximity matrix.
template <typename Derived>
SimilarityMatrix<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& proximity,
                                                      SymmetrizeMode mode) {
  using Scalar = typename Derived::Scalar;
  if (proximity.rows() != proximity.cols()) throw Error("proximity matrix must be square");
  if (!proximity.allFinite()) throw Error("proximity matrix contains non-finite values");
  const Matrix<Scalar> transposed = proximity.transpose();
  Matrix<Scalar> s;
  switch (mode) {
    case SymmetrizeMode::Average:
      s = (proximity + transposed) / Scalar(2);
      break;
    case SymmetrizeMode::Min:
      s = proximity.cwiseMin(transposed);
      break;
    case SymmetrizeMode::Max:
      s = proximity.cwiseMax(transposed);
      break;
  }
  return make_similarity(s);
}

// Dense labeled CSV: header `,<label>...`, one row per label.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& labels);
Eigen::MatrixXd read_matrix_csv(std::istream& in, std::vector<std::string>& labels);

// Flat binary: uint64 N (little-endian), then N*N row-major float64.
void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& values);
Eigen::MatrixXd read_matrix_binary(std::istream& in);

/// Chooses the format by extension (.bin binary, otherwise CSV). Binary files
/// carry no labels; their nodes are labeled by index.
Eigen::MatrixXd read_matrix_file(const std::filesystem::path& path, std::vector<std::string>& labels);
void write_matrix_file(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                       const std::vector<std::string>& labels);

}  // namespace rolenet
