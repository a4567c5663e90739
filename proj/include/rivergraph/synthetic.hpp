#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "rivergraph/matrix.hpp"
#include "rivergraph/network.hpp"

namespace rivergraph {

struct BasinOptions {
  std::size_t hours = 4000;
  double min_length_km = 5.0;
  double max_length_km = 30.0;
  double velocity_kmh = 2.5;        // channel travel time = length / velocity
  double storm_start_prob = 0.02;   // per hour, basin-wide storms
  double storm_mean_hours = 8.0;
  double storm_mean_intensity = 2.0;  // mm/h
  double shower_prob = 0.004;       // per node-hour, local showers
  double shower_mean_intensity = 0.8;
};

// Random river tree with stations 0..n-1 and outlet 0: every other station
// drains into exactly one lower-numbered station. Half of the attachments
// extend the previous station, which keeps trees elongated like real
// drainage networks.
RiverNetwork random_river_tree(std::size_t n, std::mt19937_64& rng, double min_length_km = 5.0,
                               double max_length_km = 30.0);

// Linear-reservoir toy basin. Each station turns local rainfall into runoff
// through a reservoir with coefficient local_coeff; each reach delays the
// upstream discharge by lag_hours and passes it through a channel reservoir
// with coefficient routing. Both reservoirs conserve mass.
struct SyntheticBasin {
  RiverNetwork network;
  std::vector<double> routing;          // per edge, in (0, 1]
  std::vector<std::size_t> lag_hours;   // per edge
  std::vector<double> local_coeff;      // per node, in (0, 1]
  std::vector<double> area_km2;         // per node
  Matrix rainfall;                      // hours x nodes, mm/h
  Matrix discharge;                     // hours x nodes, m^3/s
};

// size >= 2.
SyntheticBasin generate_basin(std::size_t size, std::uint64_t seed, const BasinOptions& options = {});

// Runoff entering each station's local reservoir, hours x nodes (m^3/s).
Matrix local_inflow(const SyntheticBasin& basin);

// Re-runs the routing recursion over basin.rainfall.
Matrix simulate_discharge(const SyntheticBasin& basin);

}  // namespace rivergraph
