#include "rivergraph/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "rivergraph/error.hpp"
#include "rivergraph/parallel.hpp"

namespace rivergraph {
namespace {

using EigenMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigenMatrix to_eigen(const Matrix& m) {
  return Eigen::Map<const EigenMatrix>(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

Matrix from_eigen(const EigenMatrix& e) {
  Matrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  Eigen::Map<EigenMatrix>(m.data(), e.rows(), e.cols()) = e;
  return m;
}

std::vector<std::size_t> components_of(const Matrix& w) {
  const std::size_t n = w.rows();
  std::vector<std::size_t> label(n, n);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (label[v] == n && (w(u, v) != 0.0 || w(v, u) != 0.0)) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

// Moore-Penrose inverse of a symmetric matrix from its eigendecomposition.
EigenMatrix symmetric_pinv(const EigenMatrix& l) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const double largest = lambda.size() == 0 ? 0.0 : lambda.cwiseAbs().maxCoeff();
  const double cutoff = kPinvRelativeCutoff * largest;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (std::abs(lambda[i]) > cutoff) inv[i] = 1.0 / lambda[i];
  EigenMatrix p = v * inv.asDiagonal() * v.transpose();
  // Round-off leaves a ~1e-17 asymmetry; the result is symmetric by construction.
  return 0.5 * (p + p.transpose());
}

EigenMatrix general_pinv(const EigenMatrix& l) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double largest = s.size() == 0 ? 0.0 : s.maxCoeff();
  const double cutoff = kPinvRelativeCutoff * largest;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cutoff) inv[i] = 1.0 / s[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

std::string_view mode_name(LaplacianMode mode) noexcept {
  return mode == LaplacianMode::symmetric ? "symmetric" : "random-walk";
}

std::optional<LaplacianMode> parse_mode(std::string_view name) noexcept {
  if (name == "symmetric") return LaplacianMode::symmetric;
  if (name == "random-walk") return LaplacianMode::random_walk;
  return std::nullopt;
}

LaplacianBundle graph_laplacian(const Matrix& weights, LaplacianMode mode, ZeroDegreePolicy zero_degree) {
  const std::size_t n = weights.rows();
  if (weights.cols() != n) throw Error(Errc::shape_mismatch, "adjacency is not square");
  for (double v : weights.values())
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::invalid_argument, "adjacency has a negative or non-finite weight");

  LaplacianBundle bundle;
  bundle.mode = mode;
  bundle.component_labels = components_of(weights);
  bundle.laplacian = Matrix(n, n);

  if (mode == LaplacianMode::symmetric) {
    const Matrix s = symmetrized(weights);
    for (std::size_t i = 0; i < n; ++i) {
      double degree = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        bundle.laplacian(i, j) = -s(i, j);
        degree += s(i, j);
      }
      bundle.laplacian(i, i) = degree;
    }
    bundle.pseudoinverse = from_eigen(symmetric_pinv(to_eigen(bundle.laplacian)));
  } else {
    bundle.out_degree.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double degree = 0.0;
      for (std::size_t j = 0; j < n; ++j) degree += weights(i, j);
      if (degree == 0.0) {
        if (zero_degree == ZeroDegreePolicy::reject)
          throw Error(Errc::singular_degree, "node " + std::to_string(i) + " has zero out-degree");
        degree = 1.0;
      }
      bundle.out_degree[i] = degree;
      for (std::size_t j = 0; j < n; ++j) bundle.laplacian(i, j) = (i == j ? 1.0 : 0.0) - weights(i, j) / degree;
    }
    bundle.pseudoinverse = from_eigen(general_pinv(to_eigen(bundle.laplacian)));
  }
  return bundle;
}

LaplacianBundle graph_laplacian(const AdjacencyMatrix& adj, LaplacianMode mode, ZeroDegreePolicy zero_degree) {
  return graph_laplacian(adj.w, mode, zero_degree);
}

double effective_resistance(const LaplacianBundle& bundle, std::size_t u, std::size_t v) {
  const std::size_t n = bundle.pseudoinverse.rows();
  if (u >= n || v >= n) throw Error(Errc::invalid_argument, "node index out of range");
  if (u == v) return 0.0;
  if (bundle.component_labels[u] != bundle.component_labels[v])
    throw Error(Errc::different_components,
                "nodes " + std::to_string(u) + " and " + std::to_string(v) + " are not connected");
  const Matrix& p = bundle.pseudoinverse;
  double r = 0.0;
  if (bundle.mode == LaplacianMode::symmetric) {
    r = p(u, u) + p(v, v) - 2.0 * p(u, v);
  } else {
    const double su = 1.0 / std::sqrt(bundle.out_degree[u]);
    const double sv = 1.0 / std::sqrt(bundle.out_degree[v]);
    r = su * su * p(u, u) + sv * sv * p(v, v) - su * sv * (p(u, v) + p(v, u));
  }
  return std::max(r, 0.0);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

ResistanceReport resistance_report(const Matrix& weights, LaplacianMode mode, unsigned threads) {
  const LaplacianBundle bundle = graph_laplacian(weights, mode);
  const std::size_t n = weights.rows();

  ResistanceReport report;
  report.mode = mode;
  report.n = n;

  std::vector<std::size_t> sizes;
  for (std::size_t label : bundle.component_labels) {
    if (label >= sizes.size()) sizes.resize(label + 1, 0);
    ++sizes[label];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < sizes.size(); ++c)
    if (sizes[c] > sizes[best]) best = c;
  for (std::size_t i = 0; i < n; ++i)
    if (bundle.component_labels[i] == best) report.component.push_back(i);

  const std::size_t m = report.component.size();
  report.excluded_pairs = n * (n - (n > 0 ? 1 : 0)) / 2 - m * (m - (m > 0 ? 1 : 0)) / 2;
  report.pairwise = Matrix(m, m);
  parallel_for(m, threads, [&](std::size_t a) {
    for (std::size_t b = a + 1; b < m; ++b)
      report.pairwise(a, b) = effective_resistance(bundle, report.component[a], report.component[b]);
  });
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) report.pairwise(b, a) = report.pairwise(a, b);

  std::vector<double> values;
  values.reserve(m * (m > 0 ? m - 1 : 0) / 2);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) values.push_back(report.pairwise(a, b));

  double top = 0.0;
  if (!values.empty()) {
    report.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    report.median = percentile(values, 0.5);
    report.p95 = percentile(values, 0.95);
    top = *std::max_element(values.begin(), values.end());
  }
  if (!(top > 0.0)) top = 1.0;

  const std::size_t bins = kResistanceHistogramBins;
  report.histogram.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) report.histogram.edges[k] = top * static_cast<double>(k) / static_cast<double>(bins);
  report.histogram.counts.assign(bins, 0);
  for (double v : values) {
    auto k = static_cast<std::size_t>(v / top * static_cast<double>(bins));
    ++report.histogram.counts[std::min(k, bins - 1)];
  }
  return report;
}

ResistanceReport resistance_report(const AdjacencyMatrix& adj, LaplacianMode mode, unsigned threads) {
  return resistance_report(adj.w, mode, threads);
}

double jacobian_bound(const BoundParams& params, double resistance) {
  if (!(params.mu >= 0.0 && params.mu < 1.0))
    throw Error(Errc::mu_out_of_range, "mu must satisfy 0 <= mu < 1, got " + std::to_string(params.mu));
  if (params.layers < 1) throw Error(Errc::invalid_argument, "layer count must be at least 1");
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) throw Error(Errc::invalid_argument, "alpha and beta must be positive");
  if (params.d_min < 1 || params.d_max < params.d_min)
    throw Error(Errc::invalid_argument, "degrees must satisfy 1 <= d_min <= d_max");
  if (!(resistance >= 0.0)) throw Error(Errc::invalid_argument, "resistance must be nonnegative");

  const double r = params.layers;
  const double growth = std::pow(2.0 * params.alpha * params.beta, r);
  const double degree_ratio = (static_cast<double>(params.d_max) / 2.0) * (2.0 / static_cast<double>(params.d_min));
  const double walk = (r + 1.0 + std::pow(params.mu, r + 1.0)) / (1.0 - params.mu);
  return growth * degree_ratio * (walk - resistance);
}

}  // namespace rivergraph
