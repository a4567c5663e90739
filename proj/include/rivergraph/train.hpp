#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <optional>
#include <span>
#include <vector>

#include "rivergraph/forecast.hpp"
#include "rivergraph/preprocess.hpp"
#include "rivergraph/synthetic.hpp"

namespace rivergraph {

// Sliding windows over a normalised multichannel record. Channel 0 is the
// discharge that is forecast. A window starting at t reads steps
// [t - history, t) and predicts discharge at [t, t + horizon).
struct ForecastDataset {
  ForecastTask task;
  std::vector<Matrix> steps;             // per hour, nodes x features (normalised)
  NormStats stats;                       // per channel, fitted on the training span
  std::size_t split = 0;                 // first hour of the test span
  std::vector<std::size_t> train_starts; // targets end at or before split
  std::vector<std::size_t> test_starts;  // targets start at or after split

  std::size_t nodes() const noexcept { return steps.empty() ? 0 : steps[0].rows(); }
  Matrix input(std::size_t start) const;
  Matrix target(std::size_t start) const;
};

// Chronological split at hour `split`; statistics from hours before it.
// `stride` thins the windows (1 = every hour).
ForecastDataset make_dataset(const std::vector<Matrix>& raw_steps, const ForecastTask& task, std::size_t split,
                             std::size_t stride = 1);

// Discharge and rainfall channels of a synthetic basin, split at
// `train_fraction` of its length.
ForecastDataset basin_dataset(const SyntheticBasin& basin, std::size_t history, std::size_t horizon,
                              double train_fraction = 0.75, std::size_t stride = 1);

// Gauge records resampled onto one hourly grid, one N x C matrix per hour in
// `stations` order. Channel 0 is discharge, then `features` in the given
// order. The grid runs from the earliest to the latest sample across the
// stations, anchored at the earliest; gaps hold the last observed value
// (the first observed value before a station starts reporting).
struct AlignedRecord {
  Timestamp start;
  std::vector<Matrix> steps;
};

AlignedRecord align_hourly(const std::vector<GaugeSeries>& series, const std::vector<StationId>& stations,
                           const std::vector<std::string>& features = {});

enum class Optimizer { adam, sgd };

struct TrainConfig {
  double lr = 2e-3;
  double weight_decay = 1e-4;
  std::vector<int> lr_halving_epochs{1, 50, 80};
  double clip_norm = 5.0;
  int epochs = 10;
  std::uint64_t seed = 0;
  std::size_t batch_size = 32;
  Optimizer optimizer = Optimizer::adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

std::string_view optimizer_name(Optimizer opt) noexcept;
std::optional<Optimizer> parse_optimizer(std::string_view name) noexcept;

// Learning rate in effect during zero-based `epoch`: halved once for every
// milestone <= epoch.
double scheduled_lr(const TrainConfig& config, int epoch);

struct TrainResult {
  std::vector<double> loss_curve;  // mean minibatch MAE per epoch
  double initial_loss = 0.0;       // training-set MAE before the first update
  double final_loss = 0.0;         // training-set MAE after the last update
};

// Minibatch MAE training with global-norm gradient clipping and the step
// schedule above. Adam applies weight decay as an L2 term on the gradient,
// SGD applies it decoupled. Deterministic for a fixed seed. Throws
// nonfinite_loss if a batch loss stops being finite.
TrainResult train(ForecastModel& model, const ForecastDataset& data, const TrainConfig& config);

// Mean absolute error over the given windows.
double evaluate_mae(const ForecastModel& model, const ForecastDataset& data, std::span<const std::size_t> starts);

struct HorizonScore {
  std::size_t horizon = 0;      // 1-based lead time in hours
  double nse = 0.0;             // mean over nodes with non-constant observations
  std::size_t nodes_scored = 0;
};

// Per-lead-time NSE on the test windows.
std::vector<HorizonScore> evaluate_nse(const ForecastModel& model, const ForecastDataset& data);

}  // namespace rivergraph
