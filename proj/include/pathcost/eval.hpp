#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathcost/baselines.hpp"
#include "pathcost/synthgen.hpp"

namespace pathcost {

struct EvalRequest {
  Path path;
  double depart_minute = 0.0;
};

struct EvalRow {
  std::string path_id;
  std::size_t cardinality = 0;
  std::string method;
  double kl = 0.0;
  double entropy = 0.0;
  double runtime_us = 0.0;
  std::size_t variables_used = 1;
};

struct EvalOptions {
  std::vector<std::string> methods{"ocrv", "crv-random", "hp", "lb"};
  int repetitions = 100;
  unsigned threads = 0;
  std::uint64_t seed = 0;  // crv-random
  bool parametric_fits = true;  // extra rows for unit paths
};

/// KL of maximum-likelihood Gaussian/Gamma/exponential fits (and of the auto
/// histogram) against the raw cost distribution on a resolution grid.
struct ParametricFit {
  std::string name;
  double kl = 0.0;
  double entropy = 0.0;
};
std::vector<ParametricFit> parametric_fit_kls(const std::vector<double>& costs,
                                              int folds, double sig,
                                              double resolution);

/// Holdout protocol: per request, the qualified trajectories of the full
/// path form the ground truth and are excluded from the store the methods
/// query. Rows keep request order.
std::vector<EvalRow> evaluate_holdout(const RoadNetwork& net,
                                      const TrajectoryStore& trajectories,
                                      const StoreParams& params,
                                      const std::vector<EvalRequest>& requests,
                                      const EvalOptions& options);

/// Generator-truth protocol: the store is learned once on all trajectories
/// and compared against the model-implied marginal.
std::vector<EvalRow> evaluate_generator(const GroundTruthModel& model,
                                        const RoadNetwork& net,
                                        const TrajectoryStore& trajectories,
                                        const StoreParams& params,
                                        const std::vector<EvalRequest>& requests,
                                        const EvalOptions& options);

std::string eval_rows_to_csv(const std::vector<EvalRow>& rows);

/// Runs one method against a prebuilt store; used by both protocols.
/// Returns nullopt when the method cannot produce an estimate.
std::optional<EvalRow> evaluate_method(const std::string& method,
                                       const VariableStore& store,
                                       const TrajectoryStore& trajectories,
                                       const EvalRequest& request,
                                       const Histogram1D& truth,
                                       const EvalOptions& options);

}  // namespace pathcost
