#include "rivergraph/adjacency.hpp"

#include <cmath>
#include <string>

#include "rivergraph/error.hpp"

namespace rivergraph {

std::string_view kind_name(AdjacencyKind kind) noexcept {
  switch (kind) {
    case AdjacencyKind::isolated: return "isolated";
    case AdjacencyKind::topology: return "topology";
    case AdjacencyKind::dense: return "dense";
    case AdjacencyKind::learned: return "learned";
  }
  return "unknown";
}

std::optional<AdjacencyKind> parse_kind(std::string_view name) noexcept {
  for (AdjacencyKind k : {AdjacencyKind::isolated, AdjacencyKind::topology, AdjacencyKind::dense, AdjacencyKind::learned})
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::size_t AdjacencyMatrix::nnz() const noexcept {
  std::size_t count = 0;
  for (double v : w.values())
    if (v != 0.0) ++count;
  return count;
}

void validate_adjacency(const AdjacencyMatrix& adj, const RiverNetwork* net) {
  const std::size_t n = adj.size();
  auto fail = [&](const std::string& what) {
    throw Error(Errc::invalid_argument, std::string(kind_name(adj.kind)) + " adjacency: " + what);
  };
  if (adj.w.cols() != n) fail("matrix is not square");
  if (!adj.nodes.empty() && adj.nodes.size() != n) fail("node list length differs from matrix size");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(adj.w(i, j) >= 0.0) || !std::isfinite(adj.w(i, j)))
        fail("entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative or non-finite");

  switch (adj.kind) {
    case AdjacencyKind::isolated:
      if (adj.nnz() != 0) fail("expected the zero matrix");
      break;
    case AdjacencyKind::dense:
      for (std::size_t i = 0; i < n; ++i) {
        if (adj.w(i, i) != 0.0) fail("nonzero diagonal at " + std::to_string(i));
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (adj.w(i, j) > 1.0) fail("entry above 1 in row " + std::to_string(i));
          s += adj.w(i, j);
        }
        if (std::abs(s - 1.0) > 1e-12) fail("row " + std::to_string(i) + " sums to " + std::to_string(s));
      }
      break;
    case AdjacencyKind::topology:
      if (net != nullptr) {
        if (net->size() != n) fail("size differs from network");
        Matrix support(n, n);
        for (std::size_t e = 0; e < net->edge_count(); ++e) support(net->src_index(e), net->dst_index(e)) = 1.0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (adj.w(i, j) > 0.0 && support(i, j) == 0.0)
              fail("weight on (" + std::to_string(i) + "," + std::to_string(j) + ") without a river edge");
      }
      break;
    case AdjacencyKind::learned:
      break;
  }
}

Matrix symmetrized(const Matrix& w) {
  if (w.rows() != w.cols()) throw Error(Errc::shape_mismatch, "symmetrized: matrix is not square");
  Matrix s(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) s(i, j) = 0.5 * (w(i, j) + w(j, i));
  return s;
}

}  // namespace rivergraph
