#include "rolenet/agglomerative.hpp"
#include "rolenet/spectral.hpp"

namespace rolenet {

std::string to_string(LaplacianMode mode) {
  return mode == LaplacianMode::Normalized ? "normalized" : "unnormalized";
}

LaplacianMode parse_laplacian(const std::string& name) {
  if (name == "normalized") return LaplacianMode::Normalized;
  if (name == "unnormalized") return LaplacianMode::Unnormalized;
  throw Error("unknown laplacian '" + name + "' (expected normalized, unnormalized)");
}

std::string to_string(LinkageMode mode) {
  switch (mode) {
    case LinkageMode::Single:
      return "single";
    case LinkageMode::Complete:
      return "complete";
    case LinkageMode::Average:
      return "average";
  }
  return "unknown";
}

LinkageMode parse_linkage(const std::string& name) {
  if (name == "single") return LinkageMode::Single;
  if (name == "complete") return LinkageMode::Complete;
  if (name == "average") return LinkageMode::Average;
  throw Error("unknown linkage '" + name + "' (expected single, complete, average)");
}

}  // namespace rolenet
