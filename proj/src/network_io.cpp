#include "rivergraph/network_io.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rivergraph/csv.hpp"

namespace rivergraph {

std::vector<Edge> read_edge_csv(const std::filesystem::path& path) {
  csv::Reader reader(path);
  const std::size_t c_src = reader.require_column("src");
  const std::size_t c_dst = reader.require_column("dst");
  const std::size_t c_len = reader.require_column("stream_length_km");
  const std::size_t c_elev = reader.require_column("elevation_diff_m");

  std::vector<Edge> edges;
  std::vector<std::string> f;
  while (reader.next(f)) {
    Edge e;
    e.src = reader.parse_uint(f[c_src], "src");
    e.dst = reader.parse_uint(f[c_dst], "dst");
    e.stream_length_km = reader.parse_double(f[c_len], "stream_length_km");
    e.elevation_diff_m = reader.parse_double(f[c_elev], "elevation_diff_m");
    edges.push_back(e);
  }
  return edges;
}

NodeTable read_node_csv(const std::filesystem::path& path) {
  csv::Reader reader(path);
  const std::size_t c_id = reader.require_column("gauge_id");
  NodeTable table;
  for (std::size_t i = 0; i < reader.header().size(); ++i)
    if (i != c_id) table.attribute_names.push_back(reader.header()[i]);
  std::vector<std::string> f;
  while (reader.next(f)) {
    table.ids.push_back(reader.parse_uint(f[c_id], "gauge_id"));
    std::vector<std::string> attrs;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (i != c_id) attrs.push_back(f[i]);
    table.attributes.push_back(std::move(attrs));
  }
  return table;
}

RiverNetwork load_network(const std::filesystem::path& edge_csv, const std::optional<std::filesystem::path>& node_csv) {
  std::vector<Edge> edges = read_edge_csv(edge_csv);
  std::vector<StationId> nodes;
  if (node_csv) {
    nodes = read_node_csv(*node_csv).ids;
  } else {
    std::set<StationId> seen;
    for (const Edge& e : edges) {
      seen.insert(e.src);
      seen.insert(e.dst);
    }
    nodes.assign(seen.begin(), seen.end());
  }
  return RiverNetwork::build(std::move(nodes), std::move(edges));
}

std::string edge_csv_text(const RiverNetwork& net) {
  std::ostringstream out;
  out << kEdgeCsvHeader << '\n';
  for (const Edge& e : net.edges())
    out << e.src << ',' << e.dst << ',' << csv::format_double(e.stream_length_km) << ','
        << csv::format_double(e.elevation_diff_m) << '\n';
  return out.str();
}

void write_edge_csv(const std::filesystem::path& path, const RiverNetwork& net) {
  csv::write_file(path, edge_csv_text(net));
}

}  // namespace rivergraph
