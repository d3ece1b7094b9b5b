#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pathcost/histogram.hpp"
#include "pathcost/roadnet.hpp"
#include "pathcost/time_util.hpp"
#include "pathcost/trajstore.hpp"

namespace pathcost {

/// Weighted mixture of uniform densities.
struct UniformMixture {
  struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    double weight = 1.0;
  };
  std::vector<Piece> pieces;

  double mean() const;
  double min() const;
  double max() const;
  double sample(std::mt19937_64& rng) const;
};

struct CostProfile {
  TimeInterval interval;
  UniformMixture mix;
};

struct RouteSpec {
  std::vector<EdgeId> edges;
  double weight = 1.0;
};

/// Synthetic grid network + trajectory model with known time-varying
/// per-edge cost mixtures and autoregressive inter-edge coupling rho.
struct GroundTruthModel {
  int rows = 1;
  int cols = 2;
  double edge_length_m = 500.0;
  double speed_limit_kmh = 50.0;
  std::uint64_t seed = 0;
  double rho = 0.0;
  bool integer_costs = true;
  TimeInterval depart{0.0, kMinutesPerDay};
  std::vector<RouteSpec> routes;  // defaults to the eastbound corridor(s)
  std::vector<CostProfile> default_profile;
  std::map<EdgeId, std::vector<CostProfile>> edge_profiles;

  static GroundTruthModel from_json_file(const std::string& filename);
  static GroundTruthModel from_json_text(const std::string& text);

  const UniformMixture& mixture_for(const EdgeId& edge, double minute) const;
  std::vector<RouteSpec> effective_routes() const;
};

RoadNetwork gen_network(int rows, int cols, double edge_length_m = 500.0,
                        double speed_limit_kmh = 50.0);
RoadNetwork gen_network(const GroundTruthModel& model);

/// West-to-east edge ids of one grid row.
std::vector<EdgeId> corridor_route(int cols, int row = 0);

/// Per-edge costs of one traversal of `route` departing at `depart_minute`,
/// with the model's coupling applied along the route.
std::vector<double> sample_costs(const GroundTruthModel& model,
                                 const std::vector<EdgeId>& route,
                                 double depart_minute, std::mt19937_64& rng);

/// n deterministic trajectories (seeded per trajectory).
std::vector<Trajectory> gen_trajectories(const GroundTruthModel& model,
                                         std::size_t n);

/// Model-implied distribution of the path's total cost for entries in the
/// interval, discretized at `grid_resolution`. Analytic for the uncoupled
/// single-edge case, otherwise seeded Monte Carlo (1e6 accepted samples).
Histogram1D ground_truth_marginal(const GroundTruthModel& model, const Path& p,
                                  const TimeInterval& interval,
                                  double grid_resolution);

void write_network_csv(const std::string& filename, const RoadNetwork& net);

}  // namespace pathcost
