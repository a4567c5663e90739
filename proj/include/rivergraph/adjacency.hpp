#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rivergraph/matrix.hpp"
#include "rivergraph/network.hpp"

namespace rivergraph {

enum class AdjacencyKind { isolated, topology, dense, learned };

std::string_view kind_name(AdjacencyKind kind) noexcept;
std::optional<AdjacencyKind> parse_kind(std::string_view name) noexcept;

// Square nonnegative weight matrix tagged with how it was produced.
//   isolated  all zeros
//   topology  nonzero only on directed river edges (i -> j)
//   dense     zero diagonal, rows sum to 1
//   learned   dense support, trainable weights
struct AdjacencyMatrix {
  AdjacencyKind kind = AdjacencyKind::isolated;
  Matrix w;
  std::optional<double> sigma_km;   // kernel width the weights were built with
  bool trainable = false;
  std::vector<StationId> nodes;     // station id per index, empty if unknown

  std::size_t size() const noexcept { return w.rows(); }
  std::size_t nnz() const noexcept;
};

// Throws invalid_argument when a kind invariant does not hold; `net` is
// consulted for the topology support check when given.
void validate_adjacency(const AdjacencyMatrix& adj, const RiverNetwork* net = nullptr);

// (W + W^T) / 2
Matrix symmetrized(const Matrix& w);

}  // namespace rivergraph
