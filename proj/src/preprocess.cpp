#include "rivergraph/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rivergraph/error.hpp"

namespace rivergraph {
namespace {

constexpr std::chrono::seconds kHour{3600};

}  // namespace

std::size_t StudyPeriod::hours() const {
  if (end <= start) return 0;
  return static_cast<std::size_t>((end - start) / kHour);
}

QCReport screen_discharge(const GaugeSeries& series, const std::optional<StudyPeriod>& period) {
  QCReport report;
  report.station = series.station;
  for (double q : series.discharge)
    if (q < 0.0) ++report.negative_count;
  if (series.discharge.empty()) report.missing_hours = period ? std::max<std::size_t>(period->hours(), 1) : 1;
  report.refresh();
  return report;
}

QCReport check_completeness(const GaugeSeries& series, Timestamp period_start, Timestamp period_end) {
  if (!(period_start < period_end)) throw Error(Errc::invalid_argument, "study period must start before it ends");
  const StudyPeriod period{period_start, period_end};
  const std::size_t expected = period.hours();

  std::vector<char> present(expected, 0);
  std::size_t distinct = 0, repeats = 0;
  for (Timestamp t : series.timestamps) {
    if (t < period_start || t >= period_end) continue;
    const auto offset = t - period_start;
    if (offset % kHour != std::chrono::seconds{0}) continue;
    const auto slot = static_cast<std::size_t>(offset / kHour);
    if (slot >= expected) continue;
    if (present[slot]) {
      ++repeats;
    } else {
      present[slot] = 1;
      ++distinct;
    }
  }

  QCReport report;
  report.station = series.station;
  report.missing_hours = expected - distinct + repeats;
  report.refresh();
  return report;
}

QCReport run_qc(const GaugeSeries& series, const StudyPeriod& period) {
  QCReport report = check_completeness(series, period.start, period.end);
  report.negative_count = screen_discharge(series, period).negative_count;
  report.refresh();
  return report;
}

RiverNetwork bypass_remove(const RiverNetwork& net, StationId station) {
  const auto idx = net.index_of(station);
  if (!idx) throw Error(Errc::unknown_station, "station " + std::to_string(station) + " is not in the network");

  std::vector<Edge> kept;
  std::vector<Edge> upstream, downstream;
  for (const Edge& e : net.edges()) {
    if (e.dst == station)
      upstream.push_back(e);
    else if (e.src == station)
      downstream.push_back(e);
    else
      kept.push_back(e);
  }

  for (const Edge& in : upstream) {
    for (const Edge& out : downstream) {
      Edge joined{in.src, out.dst, in.stream_length_km + out.stream_length_km, in.elevation_diff_m + out.elevation_diff_m};
      auto existing = std::find_if(kept.begin(), kept.end(),
                                   [&](const Edge& e) { return e.src == joined.src && e.dst == joined.dst; });
      if (existing == kept.end())
        kept.push_back(joined);
      else if (joined.stream_length_km < existing->stream_length_km)
        *existing = joined;
    }
  }

  std::vector<StationId> nodes;
  for (StationId id : net.nodes())
    if (id != station) nodes.push_back(id);
  return RiverNetwork::build(std::move(nodes), std::move(kept));
}

RiverNetwork extract_subgraph(const RiverNetwork& net, const std::set<StationId>& keep) {
  for (StationId id : keep)
    if (!net.contains(id)) throw Error(Errc::unknown_station, "keep-set station " + std::to_string(id) + " is not in the network");
  RiverNetwork current = net;
  for (std::size_t i : net.topological_order()) {
    const StationId id = net.id_at(i);
    if (!keep.contains(id)) current = bypass_remove(current, id);
  }
  return current;
}

double NormStats::scale(std::size_t feature) const noexcept {
  return stddev[feature] > 0.0 ? stddev[feature] : 1.0;
}

NormStats fit_zscore(const std::vector<std::vector<double>>& columns, std::optional<std::size_t> train_count,
                     std::vector<std::string> names) {
  NormStats stats;
  if (names.empty())
    for (std::size_t f = 0; f < columns.size(); ++f) names.push_back("f" + std::to_string(f));
  if (names.size() != columns.size()) throw Error(Errc::shape_mismatch, "feature name count differs from column count");
  stats.names = std::move(names);

  for (std::size_t f = 0; f < columns.size(); ++f) {
    const std::size_t count = std::min(columns[f].size(), train_count.value_or(columns[f].size()));
    if (count < 2)
      throw Error(Errc::invalid_argument, "feature '" + stats.names[f] + "' needs at least two training values");
    double mean = 0.0;
    for (std::size_t i = 0; i < count; ++i) mean += columns[f][i];
    mean /= static_cast<double>(count);
    double var = 0.0;
    for (std::size_t i = 0; i < count; ++i) var += (columns[f][i] - mean) * (columns[f][i] - mean);
    var /= static_cast<double>(count);
    stats.mean.push_back(mean);
    stats.stddev.push_back(std::sqrt(var));
    if (!(var > 0.0)) stats.zero_variance.push_back(f);
  }
  return stats;
}

std::vector<std::vector<double>> apply_zscore(const std::vector<std::vector<double>>& columns, const NormStats& stats) {
  if (columns.size() != stats.mean.size()) throw Error(Errc::shape_mismatch, "column count differs from statistics");
  std::vector<std::vector<double>> out = columns;
  for (std::size_t f = 0; f < out.size(); ++f)
    for (double& x : out[f]) x = stats.normalize(f, x);
  return out;
}

std::vector<std::vector<double>> invert_zscore(const std::vector<std::vector<double>>& columns, const NormStats& stats) {
  if (columns.size() != stats.mean.size()) throw Error(Errc::shape_mismatch, "column count differs from statistics");
  std::vector<std::vector<double>> out = columns;
  for (std::size_t f = 0; f < out.size(); ++f)
    for (double& x : out[f]) x = stats.denormalize(f, x);
  return out;
}

ZScoreResult zscore(const std::vector<std::vector<double>>& columns, std::optional<std::size_t> train_count) {
  ZScoreResult result;
  result.stats = fit_zscore(columns, train_count);
  result.normalized = apply_zscore(columns, result.stats);
  return result;
}

NormStats zscore_series(std::vector<GaugeSeries>& series, Timestamp train_end) {
  std::set<std::string> feature_names;
  for (const GaugeSeries& s : series)
    for (const auto& [name, values] : s.features) {
      if (values.size() != s.timestamps.size())
        throw Error(Errc::shape_mismatch, "feature '" + name + "' of station " + std::to_string(s.station) + " has wrong length");
      feature_names.insert(name);
    }
  std::vector<std::string> names{"discharge"};
  names.insert(names.end(), feature_names.begin(), feature_names.end());

  std::vector<std::vector<double>> train(names.size());
  for (const GaugeSeries& s : series) {
    if (s.discharge.size() != s.timestamps.size())
      throw Error(Errc::shape_mismatch, "discharge of station " + std::to_string(s.station) + " has wrong length");
    for (std::size_t t = 0; t < s.timestamps.size(); ++t) {
      if (s.timestamps[t] >= train_end) continue;
      train[0].push_back(s.discharge[t]);
      for (std::size_t f = 1; f < names.size(); ++f) {
        auto it = s.features.find(names[f]);
        if (it != s.features.end()) train[f].push_back(it->second[t]);
      }
    }
  }
  NormStats stats = fit_zscore(train, std::nullopt, names);

  for (GaugeSeries& s : series) {
    for (double& q : s.discharge) q = stats.normalize(0, q);
    for (std::size_t f = 1; f < names.size(); ++f) {
      auto it = s.features.find(names[f]);
      if (it != s.features.end())
        for (double& x : it->second) x = stats.normalize(f, x);
    }
  }
  return stats;
}

}  // namespace rivergraph
