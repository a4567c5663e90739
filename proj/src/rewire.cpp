#include "rivergraph/rewire.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rivergraph/error.hpp"
#include "rivergraph/simd/kernels.hpp"

namespace rivergraph {
namespace {

std::vector<StationId> index_ids(std::size_t n) {
  std::vector<StationId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  return ids;
}

}  // namespace

double auto_sigma(const DistanceMatrix& d) {
  const std::vector<double> values = d.finite_off_diagonal();
  if (values.empty()) throw Error(Errc::degenerate_sigma, "no finite off-diagonal distances");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  const double sigma = std::sqrt(var);
  if (!(sigma > 0.0)) throw Error(Errc::degenerate_sigma, "all finite distances are equal");
  return sigma;
}

double resolve_sigma(const DistanceMatrix& d, const RewireConfig& config) {
  if (!(config.epsilon_prune >= 0.0 && config.epsilon_prune < 1.0))
    throw Error(Errc::invalid_argument, "prune threshold must lie in [0, 1), got " + std::to_string(config.epsilon_prune));
  if (config.sigma_km) {
    if (*config.sigma_km == 0.0) throw Error(Errc::degenerate_sigma, "sigma is zero");
    if (!(*config.sigma_km > 0.0) || !std::isfinite(*config.sigma_km))
      throw Error(Errc::invalid_argument, "sigma must be a positive number of kilometres");
    return *config.sigma_km;
  }
  return auto_sigma(d);
}

AdjacencyMatrix dense_transform(const DistanceMatrix& d, const RewireConfig& config) {
  const double sigma = resolve_sigma(d, config);
  const double inv_sigma_sq = 1.0 / (sigma * sigma);
  const std::size_t n = d.size();
  const auto& k = simd::active();

  AdjacencyMatrix adj;
  adj.kind = AdjacencyKind::dense;
  adj.sigma_km = sigma;
  adj.w = Matrix(n, n);
  std::vector<double> exponent(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Kernel exponents -d^2 / (2 sigma^2); unreachable pairs give -inf.
    k.rbf_exponent(d.row(i).data(), inv_sigma_sq, exponent.data(), n);
    exponent[i] = -std::numeric_limits<double>::infinity();
    // Pruning compares the unshifted kernel value against the threshold.
    if (config.epsilon_prune > 0.0)
      for (double& e : exponent)
        if (std::exp(e) < config.epsilon_prune) e = -std::numeric_limits<double>::infinity();
    double top = -std::numeric_limits<double>::infinity();
    for (double e : exponent) top = std::max(top, e);
    if (!std::isfinite(top))
      throw Error(Errc::isolated_row, "row " + std::to_string(i) + " has no reachable neighbour to normalise over");
    // Shifting by the row maximum leaves the normalised row unchanged and
    // keeps far-apart stations from underflowing to an all-zero row.
    std::span<double> row = adj.w.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] = std::exp(exponent[j] - top);
    const double total = k.sum(row.data(), n);
    for (double& v : row) v /= total;
  }
  adj.nodes = index_ids(n);
  return adj;
}

AdjacencyMatrix build_adjacency(const RiverNetwork& net, const DistanceMatrix& d, const RewireConfig& config) {
  const std::size_t n = net.size();
  if (d.size() != n) throw Error(Errc::shape_mismatch, "distance matrix size differs from network");
  const std::vector<StationId> ids(net.nodes().begin(), net.nodes().end());

  AdjacencyMatrix adj;
  switch (config.kind) {
    case AdjacencyKind::isolated:
      adj.kind = AdjacencyKind::isolated;
      adj.w = Matrix(n, n);
      break;

    case AdjacencyKind::topology: {
      const double sigma = resolve_sigma(d, config);
      adj.kind = AdjacencyKind::topology;
      adj.sigma_km = sigma;
      adj.w = Matrix(n, n, -std::numeric_limits<double>::infinity());
      for (std::size_t e = 0; e < net.edge_count(); ++e) {
        const std::size_t i = net.src_index(e), j = net.dst_index(e);
        const double dij = d(i, j);
        double exponent = 0.0;
        simd::active().rbf_exponent(&dij, 1.0 / (sigma * sigma), &exponent, 1);
        if (!(std::exp(exponent) < config.epsilon_prune)) adj.w(i, j) = exponent;
      }
      // Same shifted normalisation as the dense kernel, over out-edges only.
      for (std::size_t i = 0; i < n; ++i) {
        std::span<double> row = adj.w.row(i);
        const double top = *std::max_element(row.begin(), row.end());
        if (!std::isfinite(top)) {
          std::fill(row.begin(), row.end(), 0.0);
          continue;
        }
        for (double& v : row) v = std::exp(v - top);
        const double total = simd::active().sum(row.data(), n);
        for (double& v : row) v /= total;
      }
      break;
    }

    case AdjacencyKind::dense:
      adj = dense_transform(d, config);
      break;

    case AdjacencyKind::learned: {
      adj = dense_transform(d, config);
      adj.kind = AdjacencyKind::learned;
      adj.trainable = true;
      for (std::size_t i = 0; i < n; ++i) {
        std::span<double> row = adj.w.row(i);
        std::size_t support = 0;
        for (double v : row)
          if (v != 0.0) ++support;
        for (double& v : row) v = v != 0.0 ? 1.0 / static_cast<double>(support) : 0.0;
      }
      break;
    }
  }
  adj.nodes = ids;
  return adj;
}

}  // namespace rivergraph
