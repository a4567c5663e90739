#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace rivergraph {

using StationId = std::uint64_t;

// One reach between two gauges; src is upstream of dst.
struct Edge {
  StationId src = 0;
  StationId dst = 0;
  double stream_length_km = 0.0;
  double elevation_diff_m = 0.0;

  bool operator==(const Edge&) const = default;
};

// Directed acyclic gauge graph. Nodes are stored sorted by identifier and
// that order is the index space of every matrix derived from the network.
// Immutable once built.
class RiverNetwork {
 public:
  RiverNetwork() = default;

  // Validates and canonicalises the input: unique identifiers, known
  // endpoints, no self loops or duplicate (src, dst) pairs, positive
  // stream lengths, acyclic. Throws rivergraph::Error naming the offending
  // element.
  static RiverNetwork build(std::vector<StationId> nodes, std::vector<Edge> edges);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const StationId> nodes() const noexcept { return nodes_; }
  // Sorted by (src index, dst index).
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::optional<std::size_t> index_of(StationId id) const noexcept;
  bool contains(StationId id) const noexcept { return index_of(id).has_value(); }
  StationId id_at(std::size_t index) const { return nodes_.at(index); }

  // Endpoint indices of edge e.
  std::size_t src_index(std::size_t e) const { return edge_src_[e]; }
  std::size_t dst_index(std::size_t e) const { return edge_dst_[e]; }

  // Edge indices leaving / entering node i.
  std::span<const std::size_t> out_edges(std::size_t i) const { return out_edges_[i]; }
  std::span<const std::size_t> in_edges(std::size_t i) const { return in_edges_[i]; }

  std::vector<std::size_t> out_degrees() const;
  std::vector<std::size_t> in_degrees() const;

  // Nodes with out-degree 0.
  std::vector<std::size_t> outlets() const;

  // Upstream-first ordering of node indices (Kahn's algorithm, ties broken
  // by index).
  std::vector<std::size_t> topological_order() const;

  // True when every node has at most one downstream edge.
  bool is_river_tree() const;

  bool operator==(const RiverNetwork& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<StationId> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> edge_src_;
  std::vector<std::size_t> edge_dst_;
  std::vector<std::vector<std::size_t>> out_edges_;
  std::vector<std::vector<std::size_t>> in_edges_;
};

// Same as RiverNetwork::build.
RiverNetwork build_network(std::vector<StationId> nodes, std::vector<Edge> edges);

// Symmetric pairwise channel distances in kilometres. Unreachable pairs hold
// +infinity.
class DistanceMatrix {
 public:
  static constexpr double unreachable = std::numeric_limits<double>::infinity();

  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, unreachable) {
    for (std::size_t i = 0; i < n; ++i) d_[i * n + i] = 0.0;
  }

  // From a row-major n*n buffer; the caller is responsible for the metric
  // invariants. Used by tests and by callers that bring their own distances.
  static DistanceMatrix from_values(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) noexcept { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {d_.data() + i * n_, n_}; }

  // Finite entries with i != j, each unordered pair counted twice.
  std::vector<double> finite_off_diagonal() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

// Shortest path lengths over the undirected view of the network (Dijkstra
// from every node).
DistanceMatrix topological_distances(const RiverNetwork& net);

std::vector<std::size_t> out_degrees(const RiverNetwork& net);
std::vector<std::size_t> in_degrees(const RiverNetwork& net);

// Weakly connected component label per node, labels numbered by first
// appearance in index order.
std::vector<std::size_t> weak_components(const RiverNetwork& net);

}  // namespace rivergraph
