#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "rivergraph/error.hpp"
#include "rivergraph/network.hpp"
#include "rivergraph/network_io.hpp"
#include "rivergraph/synthetic.hpp"

using namespace rivergraph;

namespace {

Errc build_error(std::vector<StationId> nodes, std::vector<Edge> edges) {
  try {
    RiverNetwork::build(std::move(nodes), std::move(edges));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invalid_argument;
}

RiverNetwork chain_2_3() { return build_network({0, 1, 2}, {{0, 1, 2.0, 0.0}, {1, 2, 3.0, 0.0}}); }

}  // namespace

TEST_CASE("minimal valid graph") {
  const RiverNetwork net = build_network({0, 1}, {{0, 1, 3.0, 10.0}});
  CHECK(net.size() == 2);
  CHECK(net.edge_count() == 1);
  CHECK(net.is_river_tree());
}

TEST_CASE("construction rejects malformed graphs") {
  CHECK(build_error({0, 1}, {{0, 1, 1.0, 0.0}, {1, 0, 1.0, 0.0}}) == Errc::cycle_detected);
  CHECK(build_error({0, 1, 2}, {{0, 1, 1.0, 0.0}, {1, 2, 1.0, 0.0}, {2, 0, 1.0, 0.0}}) == Errc::cycle_detected);
  CHECK(build_error({0}, {{0, 0, 1.0, 0.0}}) == Errc::cycle_detected);
  CHECK(build_error({0, 1}, {{0, 1, 1.0, 0.0}, {0, 1, 2.0, 0.0}}) == Errc::duplicate_edge);
  CHECK(build_error({0, 0}, {}) == Errc::duplicate_node);
  CHECK(build_error({0, 1}, {{0, 7, 1.0, 0.0}}) == Errc::unknown_station);
  CHECK(build_error({0, 1}, {{0, 1, 0.0, 0.0}}) == Errc::nonpositive_length);
  CHECK(build_error({0, 1}, {{0, 1, -2.0, 0.0}}) == Errc::nonpositive_length);
  CHECK(build_error({0, 1}, {{0, 1, NAN, 0.0}}) == Errc::nonpositive_length);
}

TEST_CASE("cycle errors name a node on the cycle") {
  try {
    build_network({5, 6, 7, 8}, {{5, 6, 1.0, 0.0}, {6, 7, 1.0, 0.0}, {7, 6, 1.0, 0.0}});
    FAIL("expected cycle");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK((msg.find('6') != std::string::npos || msg.find('7') != std::string::npos));
  }
}

TEST_CASE("nodes are sorted by id and fix the index space") {
  const RiverNetwork net = build_network({30, 10, 20}, {{30, 10, 1.0, 0.0}, {20, 10, 2.0, 0.0}});
  CHECK(net.id_at(0) == 10);
  CHECK(net.id_at(1) == 20);
  CHECK(net.id_at(2) == 30);
  CHECK(net.index_of(20) == 1u);
  CHECK_FALSE(net.index_of(99).has_value());
  CHECK(net.outlets() == std::vector<std::size_t>{0});
}

TEST_CASE("chain outlet and degrees") {
  const RiverNetwork net = chain_2_3();
  CHECK(net.outlets() == std::vector<std::size_t>{2});
  CHECK(out_degrees(net) == std::vector<std::size_t>{1, 1, 0});
  CHECK(in_degrees(net) == std::vector<std::size_t>{0, 1, 1});

  const RiverNetwork conf = build_network({0, 1, 2}, {{0, 2, 1.0, 0.0}, {1, 2, 1.0, 0.0}});
  CHECK(in_degrees(conf)[2] == 2);
  CHECK(out_degrees(conf)[2] == 0);

  const RiverNetwork lone = build_network({0, 1, 9}, {{0, 1, 1.0, 0.0}});
  CHECK(out_degrees(lone)[2] == 0);
  CHECK(in_degrees(lone)[2] == 0);
}

TEST_CASE("topological distances on small graphs") {
  const DistanceMatrix d = topological_distances(chain_2_3());
  CHECK(d(0, 2) == 5.0);
  CHECK(d(0, 1) == 2.0);
  CHECK(d(1, 2) == 3.0);
  CHECK(d(2, 0) == 5.0);

  const DistanceMatrix split = topological_distances(build_network({0, 1, 2, 3}, {{0, 1, 1.0, 0.0}, {2, 3, 1.0, 0.0}}));
  CHECK(std::isinf(split(0, 2)));
  CHECK(std::isinf(split(3, 1)));

  // Star: leaves 1, 2, 3 at lengths 1, 2, 4 from centre 0.
  const DistanceMatrix star =
      topological_distances(build_network({0, 1, 2, 3}, {{1, 0, 1.0, 0.0}, {2, 0, 2.0, 0.0}, {3, 0, 4.0, 0.0}}));
  CHECK(star(1, 3) == 5.0);
  CHECK(star(2, 3) == 6.0);
}

TEST_CASE("distances on random trees match the path-walking oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 40)(rng);
    const RiverNetwork net = random_river_tree(n, rng, 0.5, 20.0);
    const DistanceMatrix d = topological_distances(net);
    const auto edges = testing::undirected_edges(net);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) REQUIRE(std::abs(d(u, v) - oracle::tree_path_length(n, edges, u, v)) < 1e-9);
  }
}

TEST_CASE("distance matrix metric invariants on random DAGs") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 20)(rng);
    std::vector<StationId> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back(i);
    std::vector<Edge> edges;
    std::uniform_real_distribution<double> coin(0.0, 1.0), len(0.1, 10.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (coin(rng) < 0.15) edges.push_back({i, j, len(rng), 0.0});
    const DistanceMatrix d = topological_distances(build_network(nodes, edges));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d(i, i) == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(d(i, j) == d(j, i));
        CHECK(d(i, j) >= 0.0);
        for (std::size_t k = 0; k < n; ++k)
          if (std::isfinite(d(i, k)) && std::isfinite(d(k, j))) CHECK(d(i, j) <= d(i, k) + d(k, j) + 1e-9);
      }
    }
  }
}

TEST_CASE("topological order puts every edge source first") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const RiverNetwork net = random_river_tree(std::uniform_int_distribution<std::size_t>(2, 30)(rng), rng);
    const auto order = net.topological_order();
    std::vector<std::size_t> position(net.size());
    for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k;
    for (std::size_t e = 0; e < net.edge_count(); ++e) CHECK(position[net.src_index(e)] < position[net.dst_index(e)]);
  }
}

TEST_CASE("weak components") {
  const RiverNetwork net = build_network({0, 1, 2, 3, 4}, {{0, 1, 1.0, 0.0}, {3, 2, 1.0, 0.0}});
  CHECK(weak_components(net) == std::vector<std::size_t>{0, 0, 1, 1, 2});
}

TEST_CASE("edge CSV round trip and parse errors carry file:line") {
  testing::TempDir dir;
  const RiverNetwork net = build_network({1, 2, 3}, {{1, 2, 2.5, -1.0}, {2, 3, 0.1, 3.25}});
  write_edge_csv(dir / "edges.csv", net);
  CHECK(load_network(dir / "edges.csv") == net);

  testing::write_text(dir / "bad.csv", "src,dst,stream_length_km,elevation_diff_m\n1,2,3.0,0\n2,3,abc,0\n");
  try {
    load_network(dir / "bad.csv");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
  }

  testing::write_text(dir / "nodes.csv", "gauge_id,name\n1,a\n2,b\n3,c\n4,d\n");
  const RiverNetwork with_nodes = load_network(dir / "edges.csv", dir / "nodes.csv");
  CHECK(with_nodes.size() == 4);
  CHECK(with_nodes.contains(4));
}
