#include <doctest.h>

#include <json.hpp>
#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "rivergraph/cli.hpp"
#include "rivergraph/network_io.hpp"
#include "rivergraph/serialize.hpp"

using namespace rivergraph;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kChain = "src,dst,stream_length_km,elevation_diff_m\n0,1,1,0\n1,2,1,0\n";

std::string gauge_text(double first_value, int hours) {
  std::string s = "timestamp,qobs\n";
  for (int h = 0; h < hours; ++h) {
    char line[64];
    std::snprintf(line, sizeof line, "2012-03-01T%02d:00:00Z,%g\n", h, h == 0 ? first_value : 1.0 + h);
    s += line;
  }
  return s;
}

// Small synthetic basin with a rain column, shared by the train checks.
void synth_into(const testing::TempDir& dir, const std::string& nodes, const std::string& hours) {
  REQUIRE(run_cli({"--seed", "3", "synth", "--nodes", nodes, "--hours", hours, "--out", dir.path().string()}).code == 0);
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
  const Result h = run_cli({"rewire", "--help"});
  CHECK(h.code == cli::kExitOk);
  CHECK(h.out.find("--sigma") != std::string::npos);
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"rewire", "--edges", "x.csv"}).code == cli::kExitUsage);
  CHECK(run_cli({"rewire", "--edges", "x", "--out", "y", "--kind", "spiral"}).code == cli::kExitUsage);
  CHECK(run_cli({"rewire", "--edges", "x", "--out", "y", "--sigma", "-3"}).code == cli::kExitUsage);
}

TEST_CASE("qc bypasses a station with negative discharge") {
  testing::TempDir dir;
  testing::write_text(dir / "edges.csv", kChain);
  testing::write_text(dir / "gauges/0.csv", gauge_text(1.0, 6));
  testing::write_text(dir / "gauges/1.csv", gauge_text(-4.0, 6));
  testing::write_text(dir / "gauges/2.csv", gauge_text(1.0, 6));
  const auto out = dir / "out";
  const Result r = run_cli({"qc", "--edges", (dir / "edges.csv").string(), "--gauges", (dir / "gauges").string(), "--out", out.string()});
  REQUIRE(r.code == 0);
  const json report = json::parse(testing::read_file(out / "qc_report.json"));
  REQUIRE(report.size() == 3);
  CHECK(report[1]["station"] == 1);
  CHECK(report[1]["negative_count"] == 1);
  CHECK(report[1]["passed"] == false);
  const RiverNetwork net = load_network(out / "network.csv");
  CHECK(net.size() == 2);
  REQUIRE(net.edge_count() == 1);
  CHECK(net.edges()[0].src == 0);
  CHECK(net.edges()[0].dst == 2);
  CHECK(net.edges()[0].stream_length_km == 2.0);
}

TEST_CASE("qc with clean stations keeps the network") {
  testing::TempDir dir;
  testing::write_text(dir / "edges.csv", kChain);
  for (int s = 0; s < 3; ++s) testing::write_text(dir / ("gauges/" + std::to_string(s) + ".csv"), gauge_text(1.0, 4));
  const auto out = dir / "out";
  REQUIRE(run_cli({"qc", "--edges", (dir / "edges.csv").string(), "--gauges", (dir / "gauges").string(), "--out", out.string()}).code == 0);
  const RiverNetwork in = load_network(dir / "edges.csv"), kept = load_network(out / "network.csv");
  CHECK(std::ranges::equal(kept.nodes(), in.nodes()));
  CHECK(std::ranges::equal(kept.edges(), in.edges()));
}

TEST_CASE("qc on an empty gauge directory") {
  testing::TempDir dir;
  testing::write_text(dir / "edges.csv", kChain);
  std::filesystem::create_directories(dir / "gauges");
  const Result r = run_cli({"qc", "--edges", (dir / "edges.csv").string(), "--gauges", (dir / "gauges").string(), "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find("no stations found") != std::string::npos);
}

TEST_CASE("rewire kinds on the chain") {
  testing::TempDir dir;
  testing::write_text(dir / "edges.csv", kChain);
  const auto edges = (dir / "edges.csv").string();

  REQUIRE(run_cli({"rewire", "--edges", edges, "--kind", "dense", "--sigma", "auto", "--out", (dir / "d").string()}).code == 0);
  const AdjacencyMatrix dense = read_adjacency(dir / "d/adjacency.csv");
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0.0;
    for (double v : dense.w.row(i)) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }

  REQUIRE(run_cli({"rewire", "--edges", edges, "--kind", "isolated", "--out", (dir / "i").string()}).code == 0);
  CHECK(testing::read_file(dir / "i/adjacency.csv") == "src,dst,weight\n");
  CHECK(json::parse(testing::read_file(dir / "i/adjacency.json"))["nnz"] == 0);

  REQUIRE(run_cli({"rewire", "--edges", edges, "--kind", "dense", "--out", (dir / "d2").string()}).code == 0);
  CHECK(testing::read_file(dir / "d/adjacency.csv") == testing::read_file(dir / "d2/adjacency.csv"));
  CHECK(testing::read_file(dir / "d/adjacency.json") == testing::read_file(dir / "d2/adjacency.json"));

  CHECK(run_cli({"rewire", "--edges", (dir / "nope.csv").string(), "--out", (dir / "x").string()}).code == cli::kExitInput);
}

TEST_CASE("rewire rejects a cyclic edge list") {
  testing::TempDir dir;
  testing::write_text(dir / "edges.csv", "src,dst,stream_length_km,elevation_diff_m\n0,1,1,0\n1,0,1,0\n");
  const Result r = run_cli({"rewire", "--edges", (dir / "edges.csv").string(), "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitInput);
}

TEST_CASE("resist summaries") {
  testing::TempDir dir;
  testing::write_text(dir / "pair.csv", "src,dst,stream_length_km,elevation_diff_m\n0,1,4,0\n");
  REQUIRE(run_cli({"rewire", "--edges", (dir / "pair.csv").string(), "--kind", "dense", "--out", (dir / "p").string(), "--sigma", "3"}).code == 0);
  REQUIRE(run_cli({"resist", "--adjacency", (dir / "p/adjacency.csv").string(), "--out", (dir / "pr").string()}).code == 0);
  CHECK(json::parse(testing::read_file(dir / "pr/resistance.json"))["mean"].get<double>() == doctest::Approx(1.0));

  testing::write_text(dir / "tree.csv",
                      "src,dst,stream_length_km,elevation_diff_m\n1,0,5,0\n2,1,8,0\n3,1,4,0\n4,0,12,0\n5,4,6,0\n6,5,3,0\n");
  double means[2];
  int k = 0;
  for (const char* kind : {"topology", "dense"}) {
    const auto o = dir / kind;
    REQUIRE(run_cli({"rewire", "--edges", (dir / "tree.csv").string(), "--kind", kind, "--out", o.string()}).code == 0);
    REQUIRE(run_cli({"resist", "--adjacency", (o / "adjacency.csv").string(), "--out", (o / "r").string()}).code == 0);
    means[k++] = json::parse(testing::read_file(o / "r/resistance.json"))["mean"].get<double>();
  }
  CHECK(means[1] < means[0]);

  testing::write_text(dir / "split.csv", "src,dst,stream_length_km,elevation_diff_m\n1,0,1,0\n3,2,1,0\n4,3,1,0\n");
  REQUIRE(run_cli({"rewire", "--edges", (dir / "split.csv").string(), "--kind", "topology", "--out", (dir / "s").string()}).code == 0);
  const Result r = run_cli({"resist", "--adjacency", (dir / "s/adjacency.csv").string(), "--out", (dir / "sr").string()});
  REQUIRE(r.code == 0);
  const json j = json::parse(testing::read_file(dir / "sr/resistance.json"));
  CHECK(j["component_size"] == 3);
  CHECK(j["excluded_pairs"] == 7);
  CHECK(r.out.find("excluded pairs 7") != std::string::npos);
}

TEST_CASE("train is reproducible and writes its artefacts") {
  testing::TempDir dir;
  synth_into(dir, "5", "400");
  REQUIRE(run_cli({"rewire", "--edges", (dir / "edges.csv").string(), "--kind", "dense", "--out", (dir / "a").string()}).code == 0);
  const std::vector<std::string> common{"train", "--adjacency", (dir / "a/adjacency.csv").string(), "--gauges", (dir / "gauges").string(),
                                        "--column_map.features", "rain", "--history", "6", "--horizon", "3", "--latent", "8",
                                        "--epochs", "2"};
  auto first = common, second = common;
  first.insert(first.begin(), {"--seed", "7"});
  second.insert(second.begin(), {"--seed", "7"});
  first.insert(first.end(), {"--out", (dir / "t1").string()});
  second.insert(second.end(), {"--out", (dir / "t2").string()});
  REQUIRE(run_cli(first).code == 0);
  REQUIRE(run_cli(second).code == 0);
  const std::string metrics = testing::read_file(dir / "t1/metrics.csv");
  CHECK(metrics == testing::read_file(dir / "t2/metrics.csv"));
  CHECK(testing::read_file(dir / "t1/loss_curve.csv") == testing::read_file(dir / "t2/loss_curve.csv"));
  CHECK(testing::read_file(dir / "t1/checkpoint.json") == testing::read_file(dir / "t2/checkpoint.json"));
  CHECK(metrics.rfind("horizon,adjacency_kind,seed,nse\n1,dense,7,", 0) == 0);

  const json manifest = json::parse(testing::read_file(dir / "t1/manifest.json"));
  CHECK(manifest["command"] == "train");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["parameters"]["history"] == 6);
  CHECK(manifest["parameters"]["lr"] == 2e-3);
  for (const char* key : {"tool_version", "threads", "config_path", "inputs", "output_directory", "outputs", "simd", "started_at",
                          "wall_clock_seconds"})
    CHECK(manifest.contains(key));
}

TEST_CASE("train input errors map to exit code 2") {
  testing::TempDir dir;
  synth_into(dir, "3", "100");
  const Result missing = run_cli({"train", "--adjacency", (dir / "none.csv").string(), "--gauges", (dir / "gauges").string(),
                                  "--out", (dir / "t").string()});
  CHECK(missing.code == cli::kExitInput);
  // Row 0 sums to 0.9, which a dense adjacency may not.
  testing::write_text(dir / "bad.csv", "src,dst,weight\n0,1,0.4\n1,0,1\n0,2,0.5\n2,0,1\n");
  testing::write_text(dir / "bad.json", R"({"kind":"dense","sigma":1.0,"n":3,"nnz":4,"trainable":false,"nodes":[0,1,2]})");
  const Result invalid = run_cli({"train", "--adjacency", (dir / "bad.csv").string(), "--gauges", (dir / "gauges").string(),
                                  "--out", (dir / "t").string()});
  CHECK(invalid.code == cli::kExitInput);
  CHECK(invalid.err.find("bad.csv") != std::string::npos);
}

TEST_CASE("compute failures map to exit code 3") {
  testing::TempDir dir;
  // Two stations give a single distance, so auto sigma is degenerate.
  testing::write_text(dir / "pair.csv", "src,dst,stream_length_km,elevation_diff_m\n0,1,4,0\n");
  const Result r = run_cli({"rewire", "--edges", (dir / "pair.csv").string(), "--kind", "dense", "--out", (dir / "o").string()});
  CHECK(r.code == cli::kExitCompute);
  CHECK(r.err.find("DegenerateSigma") != std::string::npos);
}

TEST_CASE("config files feed options and lose to flags") {
  testing::TempDir dir;
  testing::write_text(dir / "edges.csv", kChain);
  testing::write_text(dir / "run.toml", "seed = 11\n[rewire]\nkind = \"isolated\"\nsigma = \"2.5\"\n");
  const auto cfg = (dir / "run.toml").string();
  REQUIRE(run_cli({"--config", cfg, "rewire", "--edges", (dir / "edges.csv").string(), "--out", (dir / "a").string()}).code == 0);
  json manifest = json::parse(testing::read_file(dir / "a/manifest.json"));
  CHECK(manifest["parameters"]["kind"] == "isolated");
  CHECK(manifest["parameters"]["sigma"] == 2.5);
  CHECK(manifest["seed"] == 11);
  CHECK(manifest["config_path"] == cfg);

  REQUIRE(run_cli({"--config", cfg, "--seed", "4", "rewire", "--edges", (dir / "edges.csv").string(), "--kind", "dense", "--out",
                   (dir / "b").string()})
              .code == 0);
  manifest = json::parse(testing::read_file(dir / "b/manifest.json"));
  CHECK(manifest["parameters"]["kind"] == "dense");
  CHECK(manifest["seed"] == 4);
  CHECK(read_adjacency(dir / "b/adjacency.csv").sigma_km == 2.5);

  testing::write_text(dir / "typo.toml", "[rewire]\nkindd = \"dense\"\n");
  CHECK(run_cli({"--config", (dir / "typo.toml").string(), "rewire", "--edges", (dir / "edges.csv").string(), "--out",
                 (dir / "c").string()})
            .code == cli::kExitUsage);
}
