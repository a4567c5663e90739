#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rivergraph/network.hpp"

namespace rivergraph {

using Timestamp = std::chrono::sys_seconds;

// Hourly discharge record for one gauge. Extra channels (rainfall, ...) live
// in `features` and must match the timestamp count.
struct GaugeSeries {
  StationId station = 0;
  std::vector<Timestamp> timestamps;
  std::vector<double> discharge;  // m^3/s
  std::map<std::string, std::vector<double>> features;
};

// Half-open study window [start, end) on the hourly grid anchored at start.
struct StudyPeriod {
  Timestamp start;
  Timestamp end;

  std::size_t hours() const;
};

struct QCReport {
  StationId station = 0;
  std::size_t negative_count = 0;
  std::size_t missing_hours = 0;
  bool passed = false;  // negative_count == 0 && missing_hours == 0

  void refresh() noexcept { passed = negative_count == 0 && missing_hours == 0; }
};

// Counts strictly negative discharge values. An empty series fails with the
// whole period missing (one missing slot when no period is given).
QCReport screen_discharge(const GaugeSeries& series, const std::optional<StudyPeriod>& period = std::nullopt);

// missing_hours = expected hourly slots - distinct slots present + repeated
// timestamps. Off-grid and out-of-window samples are ignored.
QCReport check_completeness(const GaugeSeries& series, Timestamp period_start, Timestamp period_end);

// Screening and completeness merged into one report.
QCReport run_qc(const GaugeSeries& series, const StudyPeriod& period);

// Removes `station`, reconnecting every upstream neighbour u to every
// downstream neighbour w with length and elevation difference summed along
// u -> station -> w. When u -> w already exists the shorter edge is kept.
RiverNetwork bypass_remove(const RiverNetwork& net, StationId station);

// Bypasses every station outside `keep`, upstream stations first.
RiverNetwork extract_subgraph(const RiverNetwork& net, const std::set<StationId>& keep);

// Per-feature z-score statistics (population standard deviation).
struct NormStats {
  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::size_t> zero_variance;  // features passed through with std treated as 1

  double scale(std::size_t feature) const noexcept;
  double normalize(std::size_t feature, double x) const noexcept { return (x - mean[feature]) / scale(feature); }
  double denormalize(std::size_t feature, double z) const noexcept { return z * scale(feature) + mean[feature]; }
};

// Statistics from the first `train_count` values of each column (all values
// when nullopt). Each column needs at least two training values.
NormStats fit_zscore(const std::vector<std::vector<double>>& columns, std::optional<std::size_t> train_count = std::nullopt,
                     std::vector<std::string> names = {});
std::vector<std::vector<double>> apply_zscore(const std::vector<std::vector<double>>& columns, const NormStats& stats);
std::vector<std::vector<double>> invert_zscore(const std::vector<std::vector<double>>& columns, const NormStats& stats);

struct ZScoreResult {
  std::vector<std::vector<double>> normalized;
  NormStats stats;
};

ZScoreResult zscore(const std::vector<std::vector<double>>& columns, std::optional<std::size_t> train_count = std::nullopt);

// Series-set form: discharge and each named feature are pooled across all
// stations; only samples stamped before `train_end` feed the statistics.
// Feature 0 is "discharge", followed by feature names in sorted order.
NormStats zscore_series(std::vector<GaugeSeries>& series, Timestamp train_end);

}  // namespace rivergraph
