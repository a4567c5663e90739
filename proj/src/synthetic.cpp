#include "rivergraph/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "rivergraph/error.hpp"

namespace rivergraph {
namespace {

// mm/h over km^2 to m^3/s.
constexpr double kRunoffScale = 1.0 / 3.6;

}  // namespace

RiverNetwork random_river_tree(std::size_t n, std::mt19937_64& rng, double min_length_km, double max_length_km) {
  std::uniform_real_distribution<double> length(min_length_km, max_length_km);
  std::uniform_real_distribution<double> drop(1.0, 40.0);
  std::bernoulli_distribution extend(0.5);
  std::vector<StationId> nodes(n);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) nodes[i] = i;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t parent = i - 1;
    if (!extend(rng)) parent = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    edges.push_back({i, parent, length(rng), drop(rng)});
  }
  return RiverNetwork::build(std::move(nodes), std::move(edges));
}

SyntheticBasin generate_basin(std::size_t size, std::uint64_t seed, const BasinOptions& options) {
  if (size < 2) throw Error(Errc::invalid_argument, "a synthetic basin needs at least two stations");
  std::mt19937_64 rng(seed);
  SyntheticBasin basin;
  basin.network = random_river_tree(size, rng, options.min_length_km, options.max_length_km);

  std::uniform_real_distribution<double> routing(0.3, 0.9), local(0.05, 0.25), area(10.0, 60.0);
  for (const Edge& e : basin.network.edges()) {
    basin.routing.push_back(routing(rng));
    basin.lag_hours.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(e.stream_length_km / options.velocity_kmh))));
  }
  for (std::size_t i = 0; i < size; ++i) {
    basin.local_coeff.push_back(local(rng));
    basin.area_km2.push_back(area(rng));
  }

  const std::size_t hours = options.hours;
  basin.rainfall = Matrix(hours, size);
  std::bernoulli_distribution storm_starts(options.storm_start_prob), shower(options.shower_prob);
  std::exponential_distribution<double> storm_intensity(1.0 / options.storm_mean_intensity);
  std::exponential_distribution<double> shower_intensity(1.0 / options.shower_mean_intensity);
  std::geometric_distribution<std::size_t> storm_length(1.0 / options.storm_mean_hours);
  std::uniform_real_distribution<double> footprint(0.2, 1.5);

  struct Storm {
    std::size_t remaining;
    double intensity;
    std::vector<double> weight;
  };
  std::vector<Storm> storms;
  for (std::size_t t = 0; t < hours; ++t) {
    if (storm_starts(rng)) {
      Storm s{1 + storm_length(rng), storm_intensity(rng), std::vector<double>(size)};
      for (double& w : s.weight) w = footprint(rng);
      storms.push_back(std::move(s));
    }
    for (Storm& s : storms) {
      for (std::size_t i = 0; i < size; ++i) basin.rainfall(t, i) += s.intensity * s.weight[i];
      --s.remaining;
    }
    std::erase_if(storms, [](const Storm& s) { return s.remaining == 0; });
    for (std::size_t i = 0; i < size; ++i)
      if (shower(rng)) basin.rainfall(t, i) += shower_intensity(rng);
  }

  basin.discharge = simulate_discharge(basin);
  return basin;
}

Matrix local_inflow(const SyntheticBasin& basin) {
  Matrix inflow(basin.rainfall.rows(), basin.rainfall.cols());
  for (std::size_t t = 0; t < inflow.rows(); ++t)
    for (std::size_t i = 0; i < inflow.cols(); ++i) inflow(t, i) = basin.rainfall(t, i) * basin.area_km2[i] * kRunoffScale;
  return inflow;
}

Matrix simulate_discharge(const SyntheticBasin& basin) {
  const RiverNetwork& net = basin.network;
  const std::size_t n = net.size();
  const std::size_t hours = basin.rainfall.rows();
  if (basin.rainfall.cols() != n) throw Error(Errc::shape_mismatch, "rainfall column count differs from station count");

  const Matrix inflow = local_inflow(basin);
  const std::vector<std::size_t> order = net.topological_order();
  std::vector<double> local_store(n, 0.0), channel_store(net.edge_count(), 0.0);
  Matrix q(hours, n);
  for (std::size_t t = 0; t < hours; ++t) {
    for (std::size_t i : order) {
      local_store[i] += inflow(t, i);
      double out = basin.local_coeff[i] * local_store[i];
      local_store[i] -= out;
      for (std::size_t e : net.in_edges(i)) {
        const std::size_t lag = basin.lag_hours[e];
        channel_store[e] += t >= lag ? q(t - lag, net.src_index(e)) : 0.0;
        const double routed = basin.routing[e] * channel_store[e];
        channel_store[e] -= routed;
        out += routed;
      }
      q(t, i) = out;
    }
  }
  return q;
}

}  // namespace rivergraph
