#include "rivergraph/metrics.hpp"

#include <cmath>
#include <string>

#include "rivergraph/error.hpp"

namespace rivergraph {

double nse(std::span<const double> predicted, std::span<const double> observed, std::span<const double> weights) {
  if (predicted.size() != observed.size()) throw Error(Errc::shape_mismatch, "predicted and observed lengths differ");
  if (!weights.empty() && weights.size() != observed.size()) throw Error(Errc::shape_mismatch, "weight vector length differs");
  if (observed.size() < 2) throw Error(Errc::invalid_argument, "NSE needs at least two samples");

  auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
  double wsum = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    wsum += weight(i);
    mean += weight(i) * observed[i];
  }
  if (!(wsum > 0.0)) throw Error(Errc::invalid_argument, "weights sum to zero");
  mean /= wsum;

  double err = 0.0, var = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    err += weight(i) * (predicted[i] - observed[i]) * (predicted[i] - observed[i]);
    var += weight(i) * (observed[i] - mean) * (observed[i] - mean);
  }
  if (!(var > 0.0)) throw Error(Errc::constant_observed, "observed series is constant");
  return 1.0 - err / var;
}

double mean_absolute_error(std::span<const double> predicted, std::span<const double> observed) {
  if (predicted.size() != observed.size()) throw Error(Errc::shape_mismatch, "predicted and observed lengths differ");
  if (observed.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) acc += std::abs(predicted[i] - observed[i]);
  return acc / static_cast<double>(observed.size());
}

}  // namespace rivergraph
