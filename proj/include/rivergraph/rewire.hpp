#pragma once

#include <optional>

#include "rivergraph/adjacency.hpp"
#include "rivergraph/network.hpp"

namespace rivergraph {

struct RewireConfig {
  std::optional<double> sigma_km;  // nullopt selects the automatic width
  AdjacencyKind kind = AdjacencyKind::dense;
  double epsilon_prune = 0.0;      // kernel weights below this are dropped before normalising
};

// Population standard deviation of the finite off-diagonal distances.
// Throws degenerate_sigma when it is zero or undefined.
double auto_sigma(const DistanceMatrix& d);

// Validates the config and returns the kernel width to use.
double resolve_sigma(const DistanceMatrix& d, const RewireConfig& config);

// Reachability graph: every ordered pair (i, j), i != j, is weighted by
// exp(-d_ij^2 / (2 sigma^2)), weights under epsilon_prune are zeroed, then each
// row is divided by its sum. Unreachable pairs get weight 0.
// Throws isolated_row when a row has nothing left to normalise.
AdjacencyMatrix dense_transform(const DistanceMatrix& d, const RewireConfig& config);

// Kind dispatch. The topology kind reuses the kernel above restricted to the
// directed river edges so topology and dense differ only in support; rows
// with no outgoing edge stay zero.
AdjacencyMatrix build_adjacency(const RiverNetwork& net, const DistanceMatrix& d, const RewireConfig& config);

}  // namespace rivergraph
