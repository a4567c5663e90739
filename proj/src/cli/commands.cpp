#include <algorithm>
#include <charconv>
#include <cstdint>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "rivergraph/cli.hpp"
#include "rivergraph/csv.hpp"
#include "rivergraph/error.hpp"
#include "rivergraph/gauge_io.hpp"
#include "rivergraph/network_io.hpp"
#include "rivergraph/parallel.hpp"
#include "rivergraph/rewire.hpp"
#include "rivergraph/serialize.hpp"
#include "rivergraph/simd/kernels.hpp"
#include "rivergraph/synthetic.hpp"
#include "rivergraph/train.hpp"

namespace rivergraph::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Globals {
  unsigned threads = default_threads();
  std::uint64_t seed = 0;
  std::string config;
};

struct QcArgs {
  std::string edges, nodes, gauges, out, start, end;
  std::string timestamp_column = "timestamp", discharge_column = "qobs";
};

struct RewireArgs {
  std::string edges, nodes, out;
  std::string kind = "dense", sigma = "auto";
  double prune = 0.0;
};

struct ResistArgs {
  std::string adjacency, out;
  std::string mode = "symmetric";
};

struct TrainArgs {
  std::string adjacency, gauges, out;
  std::string timestamp_column = "timestamp", discharge_column = "qobs", features;
  std::size_t history = 12, horizon = 12, latent = 32, layers = 3, batch_size = 32, stride = 1;
  int epochs = 5;
  double lr = 2e-3, weight_decay = 1e-4, clip_norm = 5.0, train_fraction = 0.75;
  std::string optimizer = "adam", activation = "relu";
};

struct SynthArgs {
  std::size_t nodes = 8, hours = 2000;
  std::string out, start = "2010-01-01T00:00:00Z";
};

const CLI::Validator kTimestamp(
    [](std::string& s) { return parse_timestamp(s) ? std::string() : "not an ISO-8601 UTC timestamp: " + s; }, "TIME");

const CLI::Validator kSigma(
    [](std::string& s) {
      if (s == "auto") return std::string();
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || !(v > 0.0)) return "sigma must be 'auto' or a positive number of km, got " + s;
      return std::string();
    },
    "KM|auto");

// Numbers and booleans keep their JSON type in the manifest.
ordered_json typed_value(const std::string& s) {
  if (s == "true" || s == "false") return s == "true";
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i); ec == std::errc() && p == s.data() + s.size() && !s.empty())
    return i;
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d); ec == std::errc() && p == s.data() + s.size() && !s.empty())
    return d;
  return s;
}

std::string long_name(const CLI::Option& opt) { return opt.get_lnames().empty() ? opt.get_name() : opt.get_lnames().front(); }

// Effective value of every option after defaulting.
ordered_json effective_options(const CLI::App& app) {
  ordered_json j = ordered_json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt == app.get_help_ptr() || opt->get_lnames().empty()) continue;
    // Options take the last value given, so that is the one in effect.
    j[long_name(*opt)] = typed_value(opt->count() > 0 ? opt->results().back() : opt->get_default_str());
  }
  return j;
}

std::string utc_now() {
  return format_timestamp(std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
}

struct Run {
  const CLI::App& root;
  const CLI::App& command;
  const Globals& globals;
  fs::path out_dir;
  ordered_json inputs = ordered_json::object();
  ordered_json outputs = ordered_json::array();
  std::string started = utc_now();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void prepare() {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create output directory " + out_dir.string() + ": " + ec.message());
  }

  fs::path output(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }

  void write_manifest() {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ordered_json m;
    m["command"] = command.get_name();
    m["tool_version"] = RIVERGRAPH_VERSION;
    m["seed"] = globals.seed;
    m["threads"] = globals.threads;
    m["config_path"] = globals.config.empty() ? ordered_json(nullptr) : ordered_json(globals.config);
    m["inputs"] = inputs;
    m["output_directory"] = out_dir.string();
    m["outputs"] = outputs;
    m["parameters"] = effective_options(command);
    m["simd"] = simd::isa_name(simd::active().isa);
    m["started_at"] = started;
    m["wall_clock_seconds"] = wall;
    csv::write_file(out_dir / "manifest.json", m.dump(2) + "\n");
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  for (std::string& p : csv::split(text, ','))
    if (!p.empty()) parts.push_back(std::move(p));
  return parts;
}

std::optional<fs::path> optional_path(const std::string& s) {
  return s.empty() ? std::nullopt : std::optional<fs::path>(s);
}

std::vector<GaugeSeries> load_stations(const std::string& dir, const ColumnMap& columns) {
  std::vector<GaugeSeries> series = load_gauge_dir(dir, columns);
  if (series.empty()) throw Error(Errc::io_error, "no stations found in " + dir);
  return series;
}

int cmd_qc(Run& run, const QcArgs& a, std::ostream& out) {
  run.inputs = {{"edges", a.edges}, {"nodes", a.nodes.empty() ? ordered_json(nullptr) : ordered_json(a.nodes)}, {"gauges", a.gauges}};
  const RiverNetwork net = load_network(a.edges, optional_path(a.nodes));
  const std::vector<GaugeSeries> series = load_stations(a.gauges, ColumnMap{a.timestamp_column, a.discharge_column, {}});

  std::optional<Timestamp> first, last;
  for (const GaugeSeries& s : series)
    for (Timestamp t : s.timestamps) {
      if (!first || t < *first) first = t;
      if (!last || t > *last) last = t;
    }
  StudyPeriod period;
  if (!a.start.empty())
    period.start = *parse_timestamp(a.start);
  else if (first)
    period.start = *first;
  else
    throw Error(Errc::invalid_argument, "gauge files hold no samples; pass --start and --end");
  if (!a.end.empty())
    period.end = *parse_timestamp(a.end);
  else if (last)
    period.end = *last + std::chrono::hours(1);
  else
    throw Error(Errc::invalid_argument, "gauge files hold no samples; pass --start and --end");

  std::map<StationId, const GaugeSeries*> by_id;
  for (const GaugeSeries& s : series) by_id[s.station] = &s;
  std::set<StationId> ids(net.nodes().begin(), net.nodes().end());
  for (const auto& [id, s] : by_id) ids.insert(id);
  const std::vector<StationId> stations(ids.begin(), ids.end());

  std::vector<QCReport> reports(stations.size());
  parallel_for(stations.size(), run.globals.threads, [&](std::size_t k) {
    auto it = by_id.find(stations[k]);
    GaugeSeries empty;
    empty.station = stations[k];
    reports[k] = run_qc(it != by_id.end() ? *it->second : empty, period);
  });

  std::set<StationId> keep;
  std::size_t flagged = 0;
  for (const QCReport& r : reports) {
    if (!r.passed) ++flagged;
    if (r.passed && net.contains(r.station)) keep.insert(r.station);
  }
  const RiverNetwork filtered = extract_subgraph(net, keep);

  csv::write_file(run.output("qc_report.json"), qc_json_text(reports));
  write_edge_csv(run.output("network.csv"), filtered);
  out << "qc: " << reports.size() << " stations, " << flagged << " flagged over " << period.hours() << " h; network "
      << net.size() << " -> " << filtered.size() << " nodes, " << net.edge_count() << " -> " << filtered.edge_count()
      << " edges\n";
  return kExitOk;
}

int cmd_rewire(Run& run, const RewireArgs& a, std::ostream& out) {
  run.inputs = {{"edges", a.edges}, {"nodes", a.nodes.empty() ? ordered_json(nullptr) : ordered_json(a.nodes)}};
  const RiverNetwork net = load_network(a.edges, optional_path(a.nodes));
  RewireConfig config;
  config.kind = *parse_kind(a.kind);
  if (a.sigma != "auto") config.sigma_km = std::stod(a.sigma);
  config.epsilon_prune = a.prune;
  const AdjacencyMatrix adj = build_adjacency(net, topological_distances(net), config);
  const fs::path path = run.output("adjacency.csv");
  run.outputs.push_back("adjacency.json");
  write_adjacency(path, adj);
  out << "rewire: " << kind_name(adj.kind) << " adjacency, n=" << adj.size() << " nnz=" << adj.nnz();
  if (adj.sigma_km) out << " sigma=" << csv::format_double(*adj.sigma_km) << " km";
  out << '\n';
  return kExitOk;
}

int cmd_resist(Run& run, const ResistArgs& a, std::ostream& out) {
  run.inputs = {{"adjacency", a.adjacency}};
  const AdjacencyMatrix adj = read_adjacency(a.adjacency);
  const ResistanceReport report = resistance_report(adj, *parse_mode(a.mode), run.globals.threads);
  csv::write_file(run.output("resistance.json"), resistance_json_text(report));
  csv::write_file(run.output("resistance.csv"), resistance_csv_text(report));
  out << "resist: " << mode_name(report.mode) << ", component " << report.component.size() << "/" << report.n
      << " nodes, mean " << csv::format_double(report.mean) << ", excluded pairs " << report.excluded_pairs << '\n';
  return kExitOk;
}

int cmd_train(Run& run, const TrainArgs& a, std::ostream& out) {
  run.inputs = {{"adjacency", a.adjacency}, {"gauges", a.gauges}};
  const AdjacencyMatrix adj = read_adjacency(a.adjacency);
  try {
    validate_adjacency(adj);
  } catch (const Error& e) {
    throw Error(Errc::parse_error, a.adjacency + ": " + e.what());
  }
  const std::vector<std::string> features = split_list(a.features);
  const std::vector<GaugeSeries> series = load_stations(a.gauges, ColumnMap{a.timestamp_column, a.discharge_column, features});
  const AlignedRecord record = align_hourly(series, adj.nodes, features);

  const ForecastTask task{a.history, a.horizon, 1 + features.size()};
  const auto split = static_cast<std::size_t>(a.train_fraction * static_cast<double>(record.steps.size()));
  const ForecastDataset data = make_dataset(record.steps, task, split, a.stride);

  std::mt19937_64 master(run.globals.seed);
  const std::uint64_t init_seed = master(), shuffle_seed = master();
  ModelConfig mc;
  mc.task = task;
  mc.latent = a.latent;
  mc.layers = a.layers;
  mc.activation = a.activation == "relu" ? Activation::relu : Activation::identity;
  ForecastModel model(mc, adj, init_seed);

  TrainConfig tc;
  tc.lr = a.lr;
  tc.weight_decay = a.weight_decay;
  tc.clip_norm = a.clip_norm;
  tc.epochs = a.epochs;
  tc.batch_size = a.batch_size;
  tc.seed = shuffle_seed;
  tc.optimizer = *parse_optimizer(a.optimizer);
  const TrainResult result = train(model, data, tc);
  const std::vector<HorizonScore> scores = evaluate_nse(model, data);

  std::vector<MetricRow> rows;
  for (const HorizonScore& s : scores) rows.push_back({s.horizon, adj.kind, run.globals.seed, s.nse});
  csv::write_file(run.output("metrics.csv"), metrics_csv_text(rows));
  std::string curve = "epoch,train_mae\n";
  for (std::size_t e = 0; e < result.loss_curve.size(); ++e) curve += std::to_string(e) + "," + csv::format_double(result.loss_curve[e]) + "\n";
  csv::write_file(run.output("loss_curve.csv"), curve);
  csv::write_file(run.output("checkpoint.json"), checkpoint_json_text(model));

  out << "train: " << kind_name(adj.kind) << ", " << data.train_starts.size() << " train / " << data.test_starts.size()
      << " test windows, train MAE " << csv::format_double(result.initial_loss) << " -> " << csv::format_double(result.final_loss)
      << ", NSE@1 " << csv::format_double(scores.front().nse) << ", NSE@" << scores.back().horizon << " "
      << csv::format_double(scores.back().nse) << '\n';
  return kExitOk;
}

int cmd_synth(Run& run, const SynthArgs& a, std::ostream& out) {
  BasinOptions options;
  options.hours = a.hours;
  const SyntheticBasin basin = generate_basin(a.nodes, run.globals.seed, options);
  write_edge_csv(run.output("edges.csv"), basin.network);
  const fs::path gauge_dir = run.out_dir / "gauges";
  fs::create_directories(gauge_dir);
  run.outputs.push_back("gauges/");
  const Timestamp start = *parse_timestamp(a.start);
  for (std::size_t i = 0; i < basin.network.size(); ++i) {
    GaugeSeries s;
    s.station = basin.network.id_at(i);
    auto& rain = s.features["rain"];
    for (std::size_t t = 0; t < a.hours; ++t) {
      s.timestamps.push_back(start + std::chrono::hours(t));
      s.discharge.push_back(basin.discharge(t, i));
      rain.push_back(basin.rainfall(t, i));
    }
    write_gauge_csv(gauge_dir / (std::to_string(s.station) + ".csv"), s);
  }
  out << "synth: " << basin.network.size() << " stations, " << a.hours << " h written to " << run.out_dir.string() << '\n';
  return kExitOk;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::io_error:
    case Errc::parse_error:
    case Errc::cycle_detected:
    case Errc::duplicate_edge:
    case Errc::duplicate_node:
    case Errc::nonpositive_length:
    case Errc::unknown_station:
    case Errc::shape_mismatch:
      return kExitInput;
    default:
      return kExitCompute;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"River network graph rewiring and streamflow forecasting toolkit", "rivergraph"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(RIVERGRAPH_VERSION));

  Globals g;
  app.add_option("--threads", g.threads, "Worker threads for pairwise and per-station work")->check(CLI::Range(1u, 4096u));
  app.add_option("--seed", g.seed, "Seed for every random draw in the run");
  app.add_option("--config", g.config, "TOML/INI config file; command-line flags win");

  const auto subcommand = [&app](const char* name, const char* about) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    return sub;
  };

  QcArgs qa;
  CLI::App* qc = subcommand("qc", "Screen gauges, check completeness and bypass failing stations");
  qc->add_option("--edges", qa.edges, "Edge CSV (src,dst,stream_length_km,elevation_diff_m)")->required();
  qc->add_option("--nodes", qa.nodes, "Node CSV with a gauge_id column");
  qc->add_option("--gauges", qa.gauges, "Directory of <gauge_id>.csv discharge files")->required();
  qc->add_option("--start", qa.start, "Study period start (default: first sample)")->check(kTimestamp);
  qc->add_option("--end", qa.end, "Study period end, exclusive (default: one hour past the last sample)")->check(kTimestamp);
  qc->add_option("--column_map.timestamp", qa.timestamp_column, "Timestamp column name");
  qc->add_option("--column_map.discharge", qa.discharge_column, "Discharge column name");
  qc->add_option("--out", qa.out, "Output directory")->required();

  RewireArgs ra;
  CLI::App* rewire = subcommand("rewire", "Build an adjacency matrix from a river network");
  rewire->add_option("--edges", ra.edges, "Edge CSV")->required();
  rewire->add_option("--nodes", ra.nodes, "Node CSV with a gauge_id column");
  rewire->add_option("--kind", ra.kind, "Adjacency kind")->check(CLI::IsMember({"isolated", "topology", "dense", "learned"}));
  rewire->add_option("--sigma", ra.sigma, "Kernel width in km, or auto")->check(kSigma);
  rewire->add_option("--prune", ra.prune, "Drop kernel weights below this before normalising")->check(CLI::Range(0.0, 1.0));
  rewire->add_option("--out", ra.out, "Output directory")->required();

  ResistArgs sa;
  CLI::App* resist = subcommand("resist", "Effective resistance summary of an adjacency matrix");
  resist->add_option("--adjacency", sa.adjacency, "Adjacency CSV written by rewire")->required();
  resist->add_option("--mode", sa.mode, "Laplacian formulation")->check(CLI::IsMember({"symmetric", "random-walk"}));
  resist->add_option("--out", sa.out, "Output directory")->required();

  TrainArgs ta;
  CLI::App* trn = subcommand("train", "Train and evaluate the graph forecaster");
  trn->add_option("--adjacency", ta.adjacency, "Adjacency CSV written by rewire")->required();
  trn->add_option("--gauges", ta.gauges, "Directory of <gauge_id>.csv files")->required();
  trn->add_option("--column_map.timestamp", ta.timestamp_column, "Timestamp column name");
  trn->add_option("--column_map.discharge", ta.discharge_column, "Discharge column name");
  trn->add_option("--column_map.features", ta.features, "Extra input columns, comma separated");
  trn->add_option("--history", ta.history, "Input window in hours")->check(CLI::PositiveNumber);
  trn->add_option("--horizon", ta.horizon, "Forecast lead time in hours")->check(CLI::PositiveNumber);
  trn->add_option("--latent", ta.latent, "Hidden width")->check(CLI::PositiveNumber);
  trn->add_option("--layers", ta.layers, "Message-passing layers")->check(CLI::NonNegativeNumber);
  trn->add_option("--activation", ta.activation, "Hidden activation")->check(CLI::IsMember({"relu", "identity"}));
  trn->add_option("--epochs", ta.epochs, "Training epochs")->check(CLI::PositiveNumber);
  trn->add_option("--lr", ta.lr, "Initial learning rate")->check(CLI::PositiveNumber);
  trn->add_option("--weight-decay", ta.weight_decay, "L2 weight decay")->check(CLI::NonNegativeNumber);
  trn->add_option("--clip-norm", ta.clip_norm, "Global gradient norm limit")->check(CLI::PositiveNumber);
  trn->add_option("--batch-size", ta.batch_size, "Windows per update")->check(CLI::PositiveNumber);
  trn->add_option("--optimizer", ta.optimizer, "Update rule")->check(CLI::IsMember({"adam", "sgd"}));
  trn->add_option("--train-fraction", ta.train_fraction, "Leading share of the record used for training")
      ->check(CLI::Range(0.0, 1.0));
  trn->add_option("--stride", ta.stride, "Hours between consecutive windows")->check(CLI::PositiveNumber);
  trn->add_option("--out", ta.out, "Output directory")->required();

  SynthArgs ya;
  CLI::App* synth = subcommand("synth", "Write a synthetic basin (edges.csv and gauges/) for demos and tests");
  synth->add_option("--nodes", ya.nodes, "Station count")->check(CLI::Range(2, 100000));
  synth->add_option("--hours", ya.hours, "Record length")->check(CLI::PositiveNumber);
  synth->add_option("--start", ya.start, "Timestamp of the first hour")->check(kTimestamp);
  synth->add_option("--out", ya.out, "Output directory")->required();

  const std::vector<CLI::App*> commands{qc, rewire, resist, trn, synth};

  std::vector<std::string> tokens = args;
  try {
    // Locate --config and the subcommand so config values can be spliced in
    // ahead of the command-line flags, which then win under TakeLast.
    std::string config_path;
    std::size_t sub_pos = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string& t = tokens[i];
      if ((t == "--config" || t == "--threads" || t == "--seed") && i + 1 < tokens.size()) {
        if (t == "--config") config_path = tokens[i + 1];
        ++i;
      } else if (t.starts_with("--config=")) {
        config_path = t.substr(9);
      } else if (!t.starts_with("-")) {
        sub_pos = i;
        break;
      }
    }
    if (!config_path.empty() && sub_pos < tokens.size()) {
      CLI::App* sub = nullptr;
      for (CLI::App* c : commands)
        if (c->get_name() == tokens[sub_pos]) sub = c;
      if (sub != nullptr) {
        std::vector<std::string> global_tokens, sub_tokens;
        for (auto [key, value] : read_config(config_path)) {
          const std::size_t dot = key.find('.');
          const std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
          const bool is_command_section =
              std::any_of(commands.begin(), commands.end(), [&](const CLI::App* c) { return c->get_name() == section; });
          if (is_command_section) {
            if (section != sub->get_name()) continue;
            key = key.substr(dot + 1);
            if (sub->get_option_no_throw("--" + key) == nullptr) {
              err << "rivergraph: unknown key '" << key << "' in [" << section << "] of " << config_path << '\n';
              return kExitUsage;
            }
          }
          if (sub->get_option_no_throw("--" + key) != nullptr)
            sub_tokens.push_back("--" + key + "=" + value);
          else if (key != "config" && app.get_option_no_throw("--" + key) != nullptr)
            global_tokens.push_back("--" + key + "=" + value);
        }
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, sub_tokens.begin(), sub_tokens.end());
        tokens.insert(tokens.begin(), global_tokens.begin(), global_tokens.end());
      }
    }
  } catch (const Error& e) {
    err << "rivergraph: " << e.what() << '\n';
    return exit_code_for(e.code());
  }

  try {
    std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  std::string out_dir;
  if (chosen == qc) out_dir = qa.out;
  if (chosen == rewire) out_dir = ra.out;
  if (chosen == resist) out_dir = sa.out;
  if (chosen == trn) out_dir = ta.out;
  if (chosen == synth) out_dir = ya.out;
  Run run{app, *chosen, g, out_dir};

  try {
    run.prepare();
    int code = kExitOk;
    if (chosen == qc) code = cmd_qc(run, qa, out);
    if (chosen == rewire) code = cmd_rewire(run, ra, out);
    if (chosen == resist) code = cmd_resist(run, sa, out);
    if (chosen == trn) code = cmd_train(run, ta, out);
    if (chosen == synth) code = cmd_synth(run, ya, out);
    run.write_manifest();
    return code;
  } catch (const Error& e) {
    err << "rivergraph: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "rivergraph: " << e.what() << '\n';
    return kExitInput;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace rivergraph::cli
