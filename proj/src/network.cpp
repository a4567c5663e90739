#include "rivergraph/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "rivergraph/error.hpp"

namespace rivergraph {

RiverNetwork RiverNetwork::build(std::vector<StationId> nodes, std::vector<Edge> edges) {
  RiverNetwork net;
  std::sort(nodes.begin(), nodes.end());
  if (auto dup = std::adjacent_find(nodes.begin(), nodes.end()); dup != nodes.end())
    throw Error(Errc::duplicate_node, "station " + std::to_string(*dup) + " listed twice");
  net.nodes_ = std::move(nodes);

  const std::size_t n = net.nodes_.size();
  auto lookup = [&](StationId id, const Edge& e) {
    auto idx = net.index_of(id);
    if (!idx)
      throw Error(Errc::unknown_station, "edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                                             " references unknown station " + std::to_string(id));
    return *idx;
  };

  std::vector<std::pair<std::size_t, std::size_t>> ends;
  ends.reserve(edges.size());
  for (const Edge& e : edges) {
    const std::string label = std::to_string(e.src) + "->" + std::to_string(e.dst);
    if (e.src == e.dst) throw Error(Errc::cycle_detected, "self loop at station " + std::to_string(e.src));
    if (!(e.stream_length_km > 0.0) || !std::isfinite(e.stream_length_km))
      throw Error(Errc::nonpositive_length,
                  "edge " + label + " has stream length " + std::to_string(e.stream_length_km));
    if (!std::isfinite(e.elevation_diff_m))
      throw Error(Errc::invalid_argument, "edge " + label + " has non-finite elevation difference");
    ends.emplace_back(lookup(e.src, e), lookup(e.dst, e));
  }

  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ends[a] < ends[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (ends[order[k]] == ends[order[k - 1]]) {
      const Edge& e = edges[order[k]];
      throw Error(Errc::duplicate_edge, "edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) + " appears twice");
    }
  }

  net.out_edges_.assign(n, {});
  net.in_edges_.assign(n, {});
  for (std::size_t k = 0; k < order.size(); ++k) {
    net.edges_.push_back(edges[order[k]]);
    net.edge_src_.push_back(ends[order[k]].first);
    net.edge_dst_.push_back(ends[order[k]].second);
    net.out_edges_[ends[order[k]].first].push_back(k);
    net.in_edges_[ends[order[k]].second].push_back(k);
  }

  const std::vector<std::size_t> order_topo = net.topological_order();
  if (order_topo.size() != n) {
    // Nodes left out of the ordering sit on or below a cycle. Walking stuck
    // predecessors from any of them must revisit a node on the cycle.
    std::vector<char> placed(n, 0);
    for (std::size_t i : order_topo) placed[i] = 1;
    std::size_t cur = static_cast<std::size_t>(std::find(placed.begin(), placed.end(), 0) - placed.begin());
    std::vector<char> seen(n, 0);
    while (!seen[cur]) {
      seen[cur] = 1;
      for (std::size_t e : net.in_edges_[cur]) {
        if (!placed[net.edge_src_[e]]) {
          cur = net.edge_src_[e];
          break;
        }
      }
    }
    throw Error(Errc::cycle_detected, "cycle through station " + std::to_string(net.nodes_[cur]));
  }
  return net;
}

RiverNetwork build_network(std::vector<StationId> nodes, std::vector<Edge> edges) {
  return RiverNetwork::build(std::move(nodes), std::move(edges));
}

std::optional<std::size_t> RiverNetwork::index_of(StationId id) const noexcept {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::size_t> RiverNetwork::out_degrees() const {
  std::vector<std::size_t> d(size());
  for (std::size_t i = 0; i < size(); ++i) d[i] = out_edges_[i].size();
  return d;
}

std::vector<std::size_t> RiverNetwork::in_degrees() const {
  std::vector<std::size_t> d(size());
  for (std::size_t i = 0; i < size(); ++i) d[i] = in_edges_[i].size();
  return d;
}

std::vector<std::size_t> RiverNetwork::outlets() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (out_edges_[i].empty()) out.push_back(i);
  return out;
}

std::vector<std::size_t> RiverNetwork::topological_order() const {
  std::vector<std::size_t> indeg = in_degrees();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < size(); ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  order.reserve(size());
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t e : out_edges_[i])
      if (--indeg[edge_dst_[e]] == 0) ready.push(edge_dst_[e]);
  }
  return order;
}

bool RiverNetwork::is_river_tree() const {
  return std::all_of(out_edges_.begin(), out_edges_.end(), [](const auto& v) { return v.size() <= 1; });
}

DistanceMatrix DistanceMatrix::from_values(std::size_t n, std::vector<double> values) {
  if (values.size() != n * n) throw Error(Errc::shape_mismatch, "distance buffer is not n*n");
  DistanceMatrix d;
  d.n_ = n;
  d.d_ = std::move(values);
  return d;
}

std::vector<double> DistanceMatrix::finite_off_diagonal() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j && std::isfinite((*this)(i, j))) out.push_back((*this)(i, j));
  return out;
}

DistanceMatrix topological_distances(const RiverNetwork& net) {
  const std::size_t n = net.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const double len = net.edges()[e].stream_length_km;
    adj[net.src_index(e)].emplace_back(net.dst_index(e), len);
    adj[net.dst_index(e)].emplace_back(net.src_index(e), len);
  }

  DistanceMatrix dist(n);
  using Item = std::pair<double, std::size_t>;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<double> best(n, DistanceMatrix::unreachable);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    best[s] = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > best[u]) continue;
      for (auto [v, w] : adj[u]) {
        if (d + w < best[v]) {
          best[v] = d + w;
          heap.emplace(best[v], v);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) dist.at(s, t) = best[t];
  }
  // Both directions come out of separate Dijkstra runs; pin exact symmetry.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::min(dist(i, j), dist(j, i));
      dist.at(i, j) = v;
      dist.at(j, i) = v;
    }
  return dist;
}

std::vector<std::size_t> out_degrees(const RiverNetwork& net) { return net.out_degrees(); }
std::vector<std::size_t> in_degrees(const RiverNetwork& net) { return net.in_degrees(); }

std::vector<std::size_t> weak_components(const RiverNetwork& net) {
  const std::size_t n = net.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    std::size_t a = find(net.src_index(e)), b = find(net.dst_index(e));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> label(n), root_label(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (root_label[r] == n) root_label[r] = next++;
    label[i] = root_label[r];
  }
  return label;
}

}  // namespace rivergraph
