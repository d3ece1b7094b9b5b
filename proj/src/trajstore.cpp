#include "pathcost/trajstore.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "pathcost/time_util.hpp"

namespace pathcost {

double CostVector::total() const {
  double s = 0.0;
  for (double c : costs) s += c;
  return s;
}

TrajectoryStore TrajectoryStore::ingest(const RoadNetwork& net,
                                        std::vector<Trajectory> trajectories,
                                        double tz_offset_minutes) {
  TrajectoryStore store;
  store.tz_offset_minutes_ = tz_offset_minutes;
  for (auto& t : trajectories) {
    if (t.records.empty()) {
      throw std::invalid_argument("trajectory " + t.id + ": no records");
    }
    std::vector<EdgeId> edges;
    edges.reserve(t.records.size());
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      const EdgeTraversal& r = t.records[i];
      if (!net.has_edge(r.edge)) {
        throw std::invalid_argument("trajectory " + t.id + ": unknown edge " +
                                    r.edge);
      }
      if (r.exit < r.enter) {
        throw std::invalid_argument("trajectory " + t.id + ": exit before enter on " +
                                    r.edge);
      }
      if (r.effective_cost() < 0.0) {
        throw std::invalid_argument("trajectory " + t.id + ": negative cost on " +
                                    r.edge);
      }
      if (i > 0 && t.records[i - 1].exit > r.enter + 1e-9) {
        throw std::invalid_argument("trajectory " + t.id +
                                    ": timestamps not non-decreasing");
      }
      edges.push_back(r.edge);
    }
    if (!net.make_path(edges)) {
      throw std::invalid_argument("trajectory " + t.id +
                                  ": records do not form a valid path");
    }
    store.trajectories_.push_back(std::move(t));
  }
  std::sort(store.trajectories_.begin(), store.trajectories_.end(),
            [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });
  for (std::size_t ti = 0; ti < store.trajectories_.size(); ++ti) {
    const auto& recs = store.trajectories_[ti].records;
    for (std::size_t pos = 0; pos < recs.size(); ++pos) {
      store.index_[recs[pos].edge].emplace_back(ti, pos);
    }
  }
  return store;
}

std::optional<CostVector> TrajectoryStore::occurrence(std::size_t traj,
                                                      std::size_t pos,
                                                      const Path& p) const {
  const auto& recs = trajectories_[traj].records;
  if (pos + p.cardinality() > recs.size()) return std::nullopt;
  CostVector cv;
  cv.costs.reserve(p.cardinality());
  for (std::size_t k = 0; k < p.cardinality(); ++k) {
    if (recs[pos + k].edge != p.edges[k]) return std::nullopt;
    cv.costs.push_back(recs[pos + k].effective_cost());
  }
  cv.entry_epoch = recs[pos].enter;
  cv.entry_minute = minute_of_day(cv.entry_epoch, tz_offset_minutes_);
  cv.trajectory_id = trajectories_[traj].id;
  return cv;
}

std::vector<CostVector> TrajectoryStore::qualified(
    const Path& p, const TimeInterval& interval) const {
  std::vector<CostVector> out;
  const auto it = index_.find(p.edges.front());
  if (it == index_.end()) return out;
  for (const auto& [traj, pos] : it->second) {
    auto cv = occurrence(traj, pos, p);
    if (cv && interval.contains(cv->entry_minute)) out.push_back(std::move(*cv));
  }
  // Index entries were built in id order, so `out` is already id-ordered.
  return out;
}

std::vector<std::vector<CostVector>> TrajectoryStore::qualified_partition(
    const Path& p, const std::vector<TimeInterval>& intervals) const {
  std::vector<std::vector<CostVector>> out(intervals.size());
  const auto it = index_.find(p.edges.front());
  if (it == index_.end()) return out;
  for (const auto& [traj, pos] : it->second) {
    auto cv = occurrence(traj, pos, p);
    if (!cv) continue;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      if (intervals[k].contains(cv->entry_minute)) {
        out[k].push_back(std::move(*cv));
        break;
      }
    }
  }
  return out;
}

TrajectoryStore TrajectoryStore::without(const std::vector<std::string>& ids,
                                         const RoadNetwork& net) const {
  std::unordered_set<std::string> drop(ids.begin(), ids.end());
  std::vector<Trajectory> keep;
  keep.reserve(trajectories_.size());
  for (const auto& t : trajectories_) {
    if (!drop.count(t.id)) keep.push_back(t);
  }
  return ingest(net, std::move(keep), tz_offset_minutes_);
}

std::vector<EdgeId> TrajectoryStore::observed_edges() const {
  std::vector<EdgeId> out;
  out.reserve(index_.size());
  for (const auto& [edge, occ] : index_) out.push_back(edge);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Trajectory> load_trajectories_jsonl(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open trajectory file " + filename);
  std::vector<Trajectory> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      Trajectory t;
      t.id = j.at("id").get<std::string>();
      for (const auto& r : j.at("records")) {
        EdgeTraversal rec;
        rec.edge = r.at("edge").get<std::string>();
        rec.enter = r.at("enter").is_string()
                        ? parse_iso8601(r.at("enter").get<std::string>())
                        : r.at("enter").get<double>();
        rec.exit = r.at("exit").is_string()
                       ? parse_iso8601(r.at("exit").get<std::string>())
                       : r.at("exit").get<double>();
        if (r.contains("cost")) rec.cost = r.at("cost").get<double>();
        t.records.push_back(std::move(rec));
      }
      out.push_back(std::move(t));
    } catch (const std::exception& e) {
      throw std::runtime_error(filename + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return out;
}

void write_trajectories_jsonl(const std::string& filename,
                              const std::vector<Trajectory>& trajectories) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot write trajectory file " + filename);
  for (const auto& t : trajectories) {
    nlohmann::ordered_json j;
    j["id"] = t.id;
    auto& records = j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : t.records) {
      nlohmann::ordered_json rec;
      rec["edge"] = r.edge;
      rec["enter"] = format_iso8601(r.enter);
      rec["exit"] = format_iso8601(r.exit);
      if (r.cost) rec["cost"] = *r.cost;
      records.push_back(std::move(rec));
    }
    out << j.dump() << '\n';
  }
}

}  // namespace pathcost
