#include "rivergraph/gauge_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rivergraph/csv.hpp"
#include "rivergraph/error.hpp"

namespace rivergraph {

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  int consumed = 0;
  const std::string buf(text);
  if (std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &consumed) != 6) return std::nullopt;
  if (sep != 'T' && sep != ' ') return std::nullopt;
  std::string_view rest = std::string_view(buf).substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest[0] == ':') {
    int used = 0;
    if (std::sscanf(rest.data(), ":%2d%n", &s, &used) != 1) return std::nullopt;
    rest.remove_prefix(static_cast<std::size_t>(used));
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000")) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) return std::nullopt;
  return Timestamp{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{s}};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

GaugeSeries read_gauge_csv(const std::filesystem::path& path, StationId station, const ColumnMap& columns) {
  csv::Reader reader(path);
  const std::size_t c_time = reader.require_column(columns.timestamp);
  const std::size_t c_q = reader.require_column(columns.discharge);
  std::vector<std::size_t> c_feat;
  for (const std::string& name : columns.features) c_feat.push_back(reader.require_column(name));

  GaugeSeries series;
  series.station = station;
  for (const std::string& name : columns.features) series.features[name];
  std::vector<std::string> f;
  std::vector<double> extra(c_feat.size());
  const auto value = [&](std::size_t col, const std::string& name, double& out) {
    const std::string& raw = f[col];
    if (raw.empty() || raw == "nan" || raw == "NaN" || raw == "NA") return false;
    out = reader.parse_double(raw, name);
    return std::isfinite(out);
  };
  while (reader.next(f)) {
    auto t = parse_timestamp(f[c_time]);
    if (!t) reader.fail("bad timestamp '" + f[c_time] + "'");
    double q = 0.0;
    if (!value(c_q, columns.discharge, q)) continue;
    bool complete = true;
    for (std::size_t k = 0; k < c_feat.size() && complete; ++k) complete = value(c_feat[k], columns.features[k], extra[k]);
    if (!complete) continue;
    series.timestamps.push_back(*t);
    series.discharge.push_back(q);
    for (std::size_t k = 0; k < c_feat.size(); ++k) series.features[columns.features[k]].push_back(extra[k]);
  }
  return series;
}

std::vector<GaugeSeries> load_gauge_dir(const std::filesystem::path& dir, const ColumnMap& columns) {
  if (!std::filesystem::is_directory(dir)) throw Error(Errc::io_error, "gauge directory not found: " + dir.string());
  std::vector<std::pair<StationId, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    const std::string stem = entry.path().stem().string();
    StationId id = 0;
    auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), id);
    if (ec != std::errc() || ptr != stem.data() + stem.size()) continue;
    files.emplace_back(id, entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GaugeSeries> out;
  out.reserve(files.size());
  for (const auto& [id, path] : files) out.push_back(read_gauge_csv(path, id, columns));
  return out;
}

void write_gauge_csv(const std::filesystem::path& path, const GaugeSeries& series) {
  std::ostringstream out;
  out << "timestamp,qobs";
  for (const auto& [name, values] : series.features) out << ',' << name;
  out << '\n';
  for (std::size_t t = 0; t < series.timestamps.size(); ++t) {
    out << format_timestamp(series.timestamps[t]) << ',' << csv::format_double(series.discharge[t]);
    for (const auto& [name, values] : series.features) out << ',' << csv::format_double(values.at(t));
    out << '\n';
  }
  csv::write_file(path, out.str());
}

}  // namespace rivergraph
