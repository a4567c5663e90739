#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rivergraph/network.hpp"

namespace rivergraph {

inline constexpr const char* kEdgeCsvHeader = "src,dst,stream_length_km,elevation_diff_m";

std::vector<Edge> read_edge_csv(const std::filesystem::path& path);

// Node CSV: `gauge_id` plus arbitrary attribute columns carried verbatim.
struct NodeTable {
  std::vector<std::string> attribute_names;
  std::vector<StationId> ids;
  std::vector<std::vector<std::string>> attributes;  // one row per id
};

NodeTable read_node_csv(const std::filesystem::path& path);

// Nodes come from the node CSV when given, otherwise from edge endpoints.
RiverNetwork load_network(const std::filesystem::path& edge_csv,
                          const std::optional<std::filesystem::path>& node_csv = std::nullopt);

std::string edge_csv_text(const RiverNetwork& net);
void write_edge_csv(const std::filesystem::path& path, const RiverNetwork& net);

}  // namespace rivergraph
