#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rivergraph/matrix.hpp"
#include "rivergraph/network.hpp"

namespace testing {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("rivergraph-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline std::vector<std::vector<double>> to_nested(const rivergraph::Matrix& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline std::vector<oracle::WeightedEdge> undirected_edges(const rivergraph::RiverNetwork& net) {
  std::vector<oracle::WeightedEdge> edges;
  for (std::size_t e = 0; e < net.edge_count(); ++e)
    edges.push_back({net.src_index(e), net.dst_index(e), net.edges()[e].stream_length_km});
  return edges;
}

// Unit-conductance adjacency of a tree with edge conductance 1 / length.
inline rivergraph::Matrix conductance_matrix(const rivergraph::RiverNetwork& net) {
  rivergraph::Matrix w(net.size(), net.size());
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const double g = 1.0 / net.edges()[e].stream_length_km;
    w(net.src_index(e), net.dst_index(e)) = g;
    w(net.dst_index(e), net.src_index(e)) = g;
  }
  return w;
}

// Random connected graph: a random spanning tree plus extra edges, weights
// in [0.2, 3].
inline rivergraph::Matrix random_connected_graph(std::size_t n, std::mt19937_64& rng, double extra_edge_prob = 0.2) {
  std::uniform_real_distribution<double> weight(0.2, 3.0), coin(0.0, 1.0);
  rivergraph::Matrix w(n, n);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    w(i, j) = w(j, i) = weight(rng);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (w(i, j) == 0.0 && coin(rng) < extra_edge_prob) w(i, j) = w(j, i) = weight(rng);
  return w;
}

}  // namespace testing
