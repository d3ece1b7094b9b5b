#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pathcost/histogram.hpp"
#include "pathcost/roadnet.hpp"
#include "pathcost/trajstore.hpp"

namespace pathcost {

enum class VariableSource { kLearnedFromData, kSpeedLimitFallback };

struct StoreParams {
  double alpha = 30.0;     // finest interval width, minutes
  std::int64_t beta = 30;  // qualified-count threshold (strict >)
  int folds = 10;
  double sig = 0.1;
  double resolution = 1.0;     // bucket padding for singleton values
  double tau_merge = 0.05;     // symmetric-KL merge threshold
  double tz_offset_minutes = 0.0;
  std::string cost_kind = "travel_time";
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// A (path, interval) pair with the joint per-edge cost histogram.
struct LearnedVariable {
  Path path;
  TimeInterval interval;
  HistogramND hist;
  std::int64_t support_count = 0;
  VariableSource source = VariableSource::kLearnedFromData;

  std::size_t rank() const { return path.cardinality(); }
  double min_cost() const { return hist.min_total_cost(); }
  double max_cost() const { return hist.max_total_cost(); }
};

/// λ = ceil(1440/alpha) half-open intervals covering the day; the last may be
/// shorter.
std::vector<TimeInterval> partition_day(double alpha);

/// Rank-1 variables for one edge: per base interval, an auto histogram when
/// strictly more than beta trajectories qualify, else the speed-limit
/// fallback; adjacent similar same-source intervals merged greedily.
std::vector<LearnedVariable> learn_unit(const RoadNetwork& net,
                                        const TrajectoryStore& store,
                                        const EdgeId& edge,
                                        const StoreParams& params);

class VariableStore {
 public:
  VariableStore(StoreParams params, std::vector<LearnedVariable> vars);

  const StoreParams& params() const { return params_; }
  const std::vector<LearnedVariable>& variables() const { return vars_; }

  /// Variables for exactly this edge sequence, interval-ordered.
  std::vector<const LearnedVariable*> for_path(const std::vector<EdgeId>& edges) const;

  std::size_t max_rank() const { return max_rank_; }

  /// Count of learned-from-data variables per rank.
  std::map<std::size_t, std::size_t> rank_histogram() const;

 private:
  StoreParams params_;
  std::vector<LearnedVariable> vars_;
  std::map<std::vector<EdgeId>, std::vector<std::size_t>> by_path_;
  std::size_t max_rank_ = 0;
};

/// Bottom-up joint learning for ranks >= 2 given completed rank-1 variables.
std::vector<LearnedVariable> learn_joints(
    const RoadNetwork& net, const TrajectoryStore& store,
    const StoreParams& params, const std::vector<LearnedVariable>& unit_vars);

/// Full off-line learning: learn_unit over all edges, then learn_joints.
VariableStore build_store(const RoadNetwork& net, const TrajectoryStore& store,
                          const StoreParams& params);

/// Simple index-sharded parallel for; runs inline when threads == 1.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace pathcost
