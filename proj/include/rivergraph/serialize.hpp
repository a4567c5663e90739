#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rivergraph/adjacency.hpp"
#include "rivergraph/forecast.hpp"
#include "rivergraph/preprocess.hpp"
#include "rivergraph/resistance.hpp"
#include "rivergraph/train.hpp"

namespace rivergraph {

// Adjacency export: coordinate list `src,dst,weight` (station ids, row-major
// by node index, nonzeros only) plus metadata {kind, sigma, n, nnz, nodes}.
std::string adjacency_csv_text(const AdjacencyMatrix& adj);
std::string adjacency_metadata_text(const AdjacencyMatrix& adj);

// Writes <stem>.csv and <stem>.json next to each other.
void write_adjacency(const std::filesystem::path& csv_path, const AdjacencyMatrix& adj);

// Reads the coordinate list; the sibling .json supplies kind, sigma and the
// node order when present, otherwise the kind defaults to `dense` and nodes
// are the sorted ids seen in the list.
AdjacencyMatrix read_adjacency(const std::filesystem::path& csv_path);

std::filesystem::path metadata_path_for(const std::filesystem::path& csv_path);

// {n, mode, mean, median, p95, histogram: {edges, counts}, component_size, excluded_pairs}
std::string resistance_json_text(const ResistanceReport& report);
// `bin_edge,count`, one row per bin, left edges.
std::string resistance_csv_text(const ResistanceReport& report);

// [{station, negative_count, missing_hours, passed}, ...]
std::string qc_json_text(const std::vector<QCReport>& reports);

struct MetricRow {
  std::size_t horizon = 0;
  AdjacencyKind kind = AdjacencyKind::isolated;
  std::uint64_t seed = 0;
  double nse = 0.0;
};

// `horizon,adjacency_kind,seed,nse`
std::string metrics_csv_text(const std::vector<MetricRow>& rows);

// Versioned JSON weight dump:
// {format: "rivergraph-checkpoint", version: "1.0", kind, nodes, config: {...},
//  tensors: [{name, rows, cols, trainable, data: [...]}, ...]}
inline constexpr const char* kCheckpointFormat = "rivergraph-checkpoint";
inline constexpr const char* kCheckpointVersion = "1.0";

std::string checkpoint_json_text(const ForecastModel& model);

// Restores weights into a model built with the same config and adjacency.
// Throws parse_error on format/version/shape mismatch.
void load_checkpoint(const std::string& json_text, ForecastModel& model);

}  // namespace rivergraph
