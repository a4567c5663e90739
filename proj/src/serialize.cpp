#include "rivergraph/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rivergraph/csv.hpp"
#include "rivergraph/error.hpp"

namespace rivergraph {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

StationId node_id(const AdjacencyMatrix& adj, std::size_t i) { return adj.nodes.empty() ? i : adj.nodes[i]; }

}  // namespace

std::string adjacency_csv_text(const AdjacencyMatrix& adj) {
  std::ostringstream out;
  out << "src,dst,weight\n";
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (std::size_t j = 0; j < adj.size(); ++j)
      if (adj.w(i, j) != 0.0) out << node_id(adj, i) << ',' << node_id(adj, j) << ',' << csv::format_double(adj.w(i, j)) << '\n';
  return out.str();
}

std::string adjacency_metadata_text(const AdjacencyMatrix& adj) {
  ordered_json j;
  j["kind"] = kind_name(adj.kind);
  j["sigma"] = adj.sigma_km ? json(*adj.sigma_km) : json(nullptr);
  j["n"] = adj.size();
  j["nnz"] = adj.nnz();
  j["trainable"] = adj.trainable;
  std::vector<StationId> ids;
  for (std::size_t i = 0; i < adj.size(); ++i) ids.push_back(node_id(adj, i));
  j["nodes"] = ids;
  return dump(j);
}

std::filesystem::path metadata_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

void write_adjacency(const std::filesystem::path& csv_path, const AdjacencyMatrix& adj) {
  csv::write_file(csv_path, adjacency_csv_text(adj));
  csv::write_file(metadata_path_for(csv_path), adjacency_metadata_text(adj));
}

AdjacencyMatrix read_adjacency(const std::filesystem::path& csv_path) {
  csv::Reader reader(csv_path);
  const std::size_t c_src = reader.require_column("src");
  const std::size_t c_dst = reader.require_column("dst");
  const std::size_t c_w = reader.require_column("weight");
  struct Entry {
    StationId src, dst;
    double w;
  };
  std::vector<Entry> entries;
  std::vector<std::string> f;
  while (reader.next(f)) {
    Entry e{reader.parse_uint(f[c_src], "src"), reader.parse_uint(f[c_dst], "dst"), reader.parse_double(f[c_w], "weight")};
    if (!(e.w >= 0.0)) reader.fail("negative weight");
    entries.push_back(e);
  }

  AdjacencyMatrix adj;
  adj.kind = AdjacencyKind::dense;
  const std::filesystem::path meta_path = metadata_path_for(csv_path);
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    json meta;
    try {
      meta = json::parse(in);
      auto kind = parse_kind(meta.at("kind").get<std::string>());
      if (!kind) throw Error(Errc::parse_error, meta_path.string() + ": unknown adjacency kind");
      adj.kind = *kind;
      if (meta.contains("sigma") && !meta["sigma"].is_null()) adj.sigma_km = meta["sigma"].get<double>();
      adj.trainable = meta.value("trainable", adj.kind == AdjacencyKind::learned);
      adj.nodes = meta.at("nodes").get<std::vector<StationId>>();
      if (meta.at("n").get<std::size_t>() != adj.nodes.size())
        throw Error(Errc::parse_error, meta_path.string() + ": n differs from the node list");
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, meta_path.string() + ": " + e.what());
    }
  } else {
    std::set<StationId> seen;
    for (const Entry& e : entries) {
      seen.insert(e.src);
      seen.insert(e.dst);
    }
    adj.nodes.assign(seen.begin(), seen.end());
  }

  std::map<StationId, std::size_t> index;
  for (std::size_t i = 0; i < adj.nodes.size(); ++i) index[adj.nodes[i]] = i;
  adj.w = Matrix(adj.nodes.size(), adj.nodes.size());
  for (const Entry& e : entries) {
    auto a = index.find(e.src), b = index.find(e.dst);
    if (a == index.end() || b == index.end())
      throw Error(Errc::parse_error, csv_path.string() + ": entry " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                                         " names a station outside the metadata node list");
    adj.w(a->second, b->second) = e.w;
  }
  return adj;
}

std::string resistance_json_text(const ResistanceReport& report) {
  ordered_json j;
  j["n"] = report.n;
  j["mode"] = mode_name(report.mode);
  j["mean"] = report.mean;
  j["median"] = report.median;
  j["p95"] = report.p95;
  j["histogram"] = {{"edges", report.histogram.edges}, {"counts", report.histogram.counts}};
  j["component_size"] = report.component.size();
  j["excluded_pairs"] = report.excluded_pairs;
  return dump(j);
}

std::string resistance_csv_text(const ResistanceReport& report) {
  std::ostringstream out;
  out << "bin_edge,count\n";
  for (std::size_t k = 0; k < report.histogram.counts.size(); ++k)
    out << csv::format_double(report.histogram.edges[k]) << ',' << report.histogram.counts[k] << '\n';
  return out.str();
}

std::string qc_json_text(const std::vector<QCReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const QCReport& r : reports)
    arr.push_back({{"station", r.station}, {"negative_count", r.negative_count}, {"missing_hours", r.missing_hours}, {"passed", r.passed}});
  return dump(arr);
}

std::string metrics_csv_text(const std::vector<MetricRow>& rows) {
  std::ostringstream out;
  out << "horizon,adjacency_kind,seed,nse\n";
  for (const MetricRow& r : rows) out << r.horizon << ',' << kind_name(r.kind) << ',' << r.seed << ',' << csv::format_double(r.nse) << '\n';
  return out.str();
}

std::string checkpoint_json_text(const ForecastModel& model) {
  const ModelConfig& c = model.config();
  ordered_json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["kind"] = kind_name(model.kind());
  j["nodes"] = model.nodes();
  j["config"] = {{"history", c.task.history},
                 {"horizon", c.task.horizon},
                 {"features", c.task.features},
                 {"latent", c.latent},
                 {"layers", c.layers},
                 {"activation", c.activation == Activation::relu ? "relu" : "identity"}};
  ordered_json tensors = ordered_json::array();
  for (const Parameter& p : model.parameters())
    tensors.push_back({{"name", p.name}, {"rows", p.value.rows()}, {"cols", p.value.cols()}, {"trainable", p.trainable}, {"data", p.value.values()}});
  j["tensors"] = std::move(tensors);
  return j.dump() + "\n";
}

void load_checkpoint(const std::string& json_text, ForecastModel& model) {
  try {
    const json j = json::parse(json_text);
    if (j.at("format").get<std::string>() != kCheckpointFormat) throw Error(Errc::parse_error, "not a checkpoint file");
    const std::string version = j.at("version").get<std::string>();
    if (version.substr(0, version.find('.')) != std::string(kCheckpointVersion).substr(0, 1))
      throw Error(Errc::parse_error, "unsupported checkpoint version " + version);
    if (j.at("nodes").get<std::size_t>() != model.nodes()) throw Error(Errc::parse_error, "checkpoint node count differs");
    const json& tensors = j.at("tensors");
    std::vector<Parameter>& params = model.parameters();
    if (tensors.size() != params.size()) throw Error(Errc::parse_error, "checkpoint tensor count differs");
    for (std::size_t p = 0; p < params.size(); ++p) {
      const json& t = tensors[p];
      if (t.at("name").get<std::string>() != params[p].name || t.at("rows").get<std::size_t>() != params[p].value.rows() ||
          t.at("cols").get<std::size_t>() != params[p].value.cols())
        throw Error(Errc::parse_error, "checkpoint tensor '" + params[p].name + "' has a different shape");
      std::vector<double> data = t.at("data").get<std::vector<double>>();
      if (data.size() != params[p].value.size()) throw Error(Errc::parse_error, "tensor '" + params[p].name + "' data length differs");
      params[p].value.values() = std::move(data);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("checkpoint: ") + e.what());
  }
}

}  // namespace rivergraph
