#pragma once

// Reference computations used as test oracles. Each one takes a different
// route from the library code it checks: tree walks instead of Dijkstra,
// grounded Gaussian elimination instead of a pseudoinverse, textbook
// formulas instead of the SIMD kernels.

#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

struct WeightedEdge {
  std::size_t a, b;
  double length;
};

// u-v path length in an undirected weighted tree, by rooting the tree at u
// and walking parent pointers back from v.
inline double tree_path_length(std::size_t n, const std::vector<WeightedEdge>& edges, std::size_t u, std::size_t v) {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& e : edges) {
    adj[e.a].push_back({e.b, e.length});
    adj[e.b].push_back({e.a, e.length});
  }
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, none);
  std::vector<double> up(n, 0.0);
  std::vector<std::size_t> stack{u};
  parent[u] = u;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (auto [y, len] : adj[x])
      if (parent[y] == none) {
        parent[y] = x;
        up[y] = len;
        stack.push_back(y);
      }
  }
  if (parent[v] == none) return INFINITY;
  double total = 0.0;
  for (std::size_t x = v; x != u; x = parent[x]) total += up[x];
  return total;
}

// Effective resistance between u and v of a connected conductance network
// (symmetric, zero diagonal): ground v, inject a unit current at u, solve the
// reduced Laplacian system by Gaussian elimination with partial pivoting and
// read off the potential at u.
inline double grounded_resistance(const std::vector<std::vector<double>>& c, std::size_t u, std::size_t v) {
  if (u == v) return 0.0;
  const std::size_t n = c.size();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    if (i != v) keep.push_back(i);
  const std::size_t m = keep.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = keep[r];
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) degree += c[i][j];
    for (std::size_t s = 0; s < m; ++s) a[r][s] = (r == s) ? degree : -c[i][keep[s]];
    a[r][m] = (i == u) ? 1.0 : 0.0;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    if (std::abs(a[col][col]) < 1e-300) throw std::runtime_error("grounded Laplacian is singular (graph disconnected?)");
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t s = col; s <= m; ++s) a[r][s] -= f * a[col][s];
    }
  }
  for (std::size_t r = 0; r < m; ++r)
    if (keep[r] == u) return a[r][m] / a[r][r];
  throw std::logic_error("u not found");
}

// Breadth-first hop counts over the undirected support of `w` (any nonzero
// w[i][j] or w[j][i] is an edge). Unreachable pairs get -1.
inline std::vector<std::vector<int>> hop_distances(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  std::vector<std::vector<int>> hops(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    std::queue<std::size_t> q;
    q.push(s);
    hops[s][s] = 0;
    while (!q.empty()) {
      const std::size_t x = q.front();
      q.pop();
      for (std::size_t y = 0; y < n; ++y)
        if ((w[x][y] != 0.0 || w[y][x] != 0.0) && hops[s][y] < 0) {
          hops[s][y] = hops[s][x] + 1;
          q.push(y);
        }
    }
  }
  return hops;
}

// Algorithm-1 row, evaluated one entry at a time.
inline std::vector<double> rbf_row(const std::vector<double>& distances, std::size_t self, double sigma) {
  std::vector<double> w(distances.size(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < distances.size(); ++j) {
    if (j == self || !std::isfinite(distances[j])) continue;
    w[j] = std::exp(-(distances[j] * distances[j]) / (2.0 * sigma * sigma));
    total += w[j];
  }
  for (double& x : w) x /= total;
  return w;
}

// Over-squashing bound by repeated multiplication rather than pow().
inline double jacobian_bound(int r, double alpha, double beta, int d_max, int d_min, double mu, double resistance) {
  double gain = 1.0, mu_power = 1.0;
  for (int k = 0; k < r; ++k) gain *= 2.0 * alpha * beta;
  for (int k = 0; k < r + 1; ++k) mu_power *= mu;
  const double degree_ratio = (static_cast<double>(d_max) / 2.0) * (2.0 / static_cast<double>(d_min));
  return gain * degree_ratio * ((r + 1 + mu_power) / (1.0 - mu) - resistance);
}

// Textbook two-pass Nash-Sutcliffe efficiency.
inline double nse(const std::vector<double>& pred, const std::vector<double>& obs) {
  double mean = 0.0;
  for (double o : obs) mean += o;
  mean /= static_cast<double>(obs.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    num += (pred[i] - obs[i]) * (pred[i] - obs[i]);
    den += (obs[i] - mean) * (obs[i] - mean);
  }
  return 1.0 - num / den;
}

}  // namespace oracle
