#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rivergraph/preprocess.hpp"

namespace rivergraph {

// Which CSV columns hold the timestamp, the discharge and any extra
// channels to load into GaugeSeries::features.
struct ColumnMap {
  std::string timestamp = "timestamp";
  std::string discharge = "qobs";
  std::vector<std::string> features;
};

// ISO-8601 UTC: "YYYY-MM-DDTHH:MM[:SS][Z|+00:00]" (a space may replace T).
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);  // "YYYY-MM-DDTHH:MM:SSZ"

// Rows with an empty or non-finite discharge or feature value are skipped (they show up as
// missing hours in QC). Throws parse_error with file:line otherwise.
GaugeSeries read_gauge_csv(const std::filesystem::path& path, StationId station, const ColumnMap& columns = {});

// Every "<gauge_id>.csv" in `dir`, sorted by id. Other files are ignored.
std::vector<GaugeSeries> load_gauge_dir(const std::filesystem::path& dir, const ColumnMap& columns = {});

void write_gauge_csv(const std::filesystem::path& path, const GaugeSeries& series);

}  // namespace rivergraph
