#include "rolenet/csv.hpp"
#include "rolenet/proxsim.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace rolenet {

static_assert(std::endian::native == std::endian::little, "binary matrix format assumes little-endian");

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& labels) {
  if (static_cast<Index>(labels.size()) != values.rows() || values.rows() != values.cols())
    throw Error("matrix and label count disagree");
  for (const auto& label : labels) out << ',' << csv::escape(label);
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    out << csv::escape(labels[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < values.cols(); ++j) out << ',' << csv::format_double(values(i, j));
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in, std::vector<std::string>& labels) {
  std::string line;
  std::size_t line_number = 0;
  if (!csv::next_line(in, line, line_number)) throw ParseError("empty matrix file");
  auto header = csv::split(line);
  if (header.size() < 2 || !header[0].empty())
    throw ParseError("expected header ',<label>,...'", line_number);
  labels.assign(header.begin() + 1, header.end());
  const auto n = static_cast<Index>(labels.size());
  Eigen::MatrixXd values(n, n);
  Index row = 0;
  while (csv::next_line(in, line, line_number)) {
    const auto fields = csv::split(line);
    if (row >= n) throw ParseError("more rows than columns", line_number);
    if (static_cast<Index>(fields.size()) != n + 1)
      throw ParseError("expected " + std::to_string(n + 1) + " fields", line_number);
    if (fields[0] != labels[static_cast<std::size_t>(row)])
      throw ParseError("row label '" + fields[0] + "' does not match column order", line_number);
    for (Index j = 0; j < n; ++j) {
      try {
        values(row, j) = csv::parse_double(fields[static_cast<std::size_t>(j + 1)]);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_number);
      }
    }
    ++row;
  }
  if (row != n) throw ParseError("expected " + std::to_string(n) + " rows, got " + std::to_string(row));
  return values;
}

void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& values) {
  if (values.rows() != values.cols()) throw Error("binary matrix must be square");
  const auto n = static_cast<std::uint64_t>(values.rows());
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = values;
  out.write(reinterpret_cast<const char*>(row_major.data()),
            static_cast<std::streamsize>(row_major.size() * sizeof(double)));
}

Eigen::MatrixXd read_matrix_binary(std::istream& in) {
  std::uint64_t n = 0;
  if (!in.read(reinterpret_cast<char*>(&n), sizeof(n))) throw ParseError("truncated matrix header");
  if (n > 100000) throw ParseError("implausible matrix size " + std::to_string(n));
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major(
      static_cast<Index>(n), static_cast<Index>(n));
  const auto bytes = static_cast<std::streamsize>(row_major.size() * sizeof(double));
  if (!in.read(reinterpret_cast<char*>(row_major.data()), bytes)) throw ParseError("truncated matrix data");
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after matrix data");
  return row_major;
}

Eigen::MatrixXd read_matrix_file(const std::filesystem::path& path, std::vector<std::string>& labels) {
  const bool binary = path.extension() == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("cannot open matrix file '" + path.string() + "'");
  if (!binary) return read_matrix_csv(in, labels);
  auto values = read_matrix_binary(in);
  labels.clear();
  for (Index i = 0; i < values.rows(); ++i) labels.push_back(std::to_string(i));
  return values;
}

void write_matrix_file(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                       const std::vector<std::string>& labels) {
  const bool binary = path.extension() == ".bin";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot write matrix file '" + path.string() + "'");
  if (binary) {
    write_matrix_binary(out, values);
  } else {
    write_matrix_csv(out, values, labels);
  }
}

}  // namespace rolenet
