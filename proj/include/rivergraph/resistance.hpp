#pragma once

#include <cstddef>
#include <string_view>
#include <optional>
#include <vector>

#include "rivergraph/adjacency.hpp"
#include "rivergraph/matrix.hpp"

namespace rivergraph {

enum class LaplacianMode {
  symmetric,    // L = D - S with S = (A + A^T) / 2
  random_walk,  // L_rw = I - D_out^{-1} A
};

std::string_view mode_name(LaplacianMode mode) noexcept;
std::optional<LaplacianMode> parse_mode(std::string_view name) noexcept;

// What to do with rows of zero weighted out-degree in random-walk mode.
enum class ZeroDegreePolicy {
  unit,    // treat the degree as 1 (the outlet of a river tree)
  reject,  // throw singular_degree
};

struct LaplacianBundle {
  LaplacianMode mode = LaplacianMode::symmetric;
  Matrix laplacian;
  Matrix pseudoinverse;
  // Weakly connected component per node, numbered by first appearance.
  std::vector<std::size_t> component_labels;
  // Weighted out-degree per node after the zero-degree policy; only
  // meaningful in random-walk mode.
  std::vector<double> out_degree;
};

// Eigenvalues (symmetric mode) or singular values (random-walk mode) below
// kPinvRelativeCutoff * largest are treated as zero.
inline constexpr double kPinvRelativeCutoff = 1e-10;

LaplacianBundle graph_laplacian(const Matrix& weights, LaplacianMode mode,
                                ZeroDegreePolicy zero_degree = ZeroDegreePolicy::unit);
LaplacianBundle graph_laplacian(const AdjacencyMatrix& adj, LaplacianMode mode,
                                ZeroDegreePolicy zero_degree = ZeroDegreePolicy::unit);

// Symmetric mode: (1_u - 1_v)^T L+ (1_u - 1_v).
// Random-walk mode: the indicators are scaled by 1/sqrt(d_out) first.
// Zero when u == v. Throws different_components when u and v are not
// connected.
double effective_resistance(const LaplacianBundle& bundle, std::size_t u, std::size_t v);

struct Histogram {
  std::vector<double> edges;         // bins + 1 edges
  std::vector<std::size_t> counts;   // bins
};

struct ResistanceReport {
  LaplacianMode mode = LaplacianMode::symmetric;
  std::size_t n = 0;                        // nodes in the adjacency
  std::vector<std::size_t> component;       // node indices evaluated (largest component)
  Matrix pairwise;                          // component.size() square
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  Histogram histogram;
  std::size_t excluded_pairs = 0;           // unordered pairs outside the evaluated component
};

inline constexpr std::size_t kResistanceHistogramBins = 50;

// All unordered pairs of the largest connected component (lowest label wins
// ties). Histogram: 50 uniform bins on [0, max]; the last bin is closed.
// threads = 0 uses every core.
ResistanceReport resistance_report(const AdjacencyMatrix& adj, LaplacianMode mode, unsigned threads = 0);
ResistanceReport resistance_report(const Matrix& weights, LaplacianMode mode, unsigned threads = 0);

// Linear-interpolated percentile of an unsorted sample, q in [0, 1].
double percentile(std::vector<double> values, double q);

// Parameters of the over-squashing sensitivity bound. alpha/beta here are
// model Lipschitz-type constants, unrelated to the forecast window lengths.
struct BoundParams {
  int layers = 1;
  double alpha = 1.0;
  double beta = 1.0;
  int d_max = 1;
  int d_min = 1;
  double mu = 0.5;
};

// (2 alpha beta)^r * (d_max / 2) * (2 / d_min) * ((r + 1 + mu^(r+1)) / (1 - mu) - R)
// Returned as computed, including negative values. Throws mu_out_of_range
// unless 0 <= mu < 1, invalid_argument for the other preconditions.
double jacobian_bound(const BoundParams& params, double resistance);

}  // namespace rivergraph
