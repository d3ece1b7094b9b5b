#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathcost/roadnet.hpp"

namespace pathcost {

/// Half-open [start, end) interval in minutes since midnight.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;

  double width() const { return end - start; }
  bool contains(double minute) const { return minute >= start && minute < end; }
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Map-matched per-edge traversal. Cost defaults to travel time (exit-enter,
/// seconds); an explicit cost column overrides it.
struct EdgeTraversal {
  EdgeId edge;
  double enter = 0.0;  // epoch seconds
  double exit = 0.0;
  std::optional<double> cost;

  double effective_cost() const { return cost ? *cost : exit - enter; }
};

struct Trajectory {
  std::string id;
  std::vector<EdgeTraversal> records;
};

/// Per-edge costs aligned to a query path, with the traversal's entry time.
struct CostVector {
  std::vector<double> costs;
  double entry_epoch = 0.0;
  double entry_minute = 0.0;
  std::string trajectory_id;

  double total() const;
};

/// Immutable occurred-on index over ingested trajectories.
class TrajectoryStore {
 public:
  static TrajectoryStore ingest(const RoadNetwork& net,
                                std::vector<Trajectory> trajectories,
                                double tz_offset_minutes = 0.0);

  /// Cost vectors of every trajectory that occurred on p with entry
  /// time-of-day in the interval; ordered by trajectory id.
  std::vector<CostVector> qualified(const Path& p, const TimeInterval& interval) const;

  /// One qualified() result per interval, scanning occurrences once.
  std::vector<std::vector<CostVector>> qualified_partition(
      const Path& p, const std::vector<TimeInterval>& intervals) const;

  /// A store with the given trajectory ids removed (holdout evaluation).
  TrajectoryStore without(const std::vector<std::string>& ids,
                          const RoadNetwork& net) const;

  std::size_t size() const { return trajectories_.size(); }
  const std::vector<Trajectory>& trajectories() const { return trajectories_; }

  /// Edges with at least one traversal record.
  std::vector<EdgeId> observed_edges() const;

 private:
  std::vector<Trajectory> trajectories_;
  double tz_offset_minutes_ = 0.0;
  // edge -> (trajectory index, record position)
  std::unordered_map<EdgeId, std::vector<std::pair<std::size_t, std::size_t>>> index_;

  std::optional<CostVector> occurrence(std::size_t traj, std::size_t pos,
                                       const Path& p) const;
};

std::vector<Trajectory> load_trajectories_jsonl(const std::string& filename);
void write_trajectories_jsonl(const std::string& filename,
                              const std::vector<Trajectory>& trajectories);

}  // namespace pathcost
