#include "pathcost/learner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "pathcost/time_util.hpp"

namespace pathcost {

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<TimeInterval> partition_day(double alpha) {
  if (!(alpha >= 1.0 && alpha <= kMinutesPerDay)) {
    throw std::invalid_argument("partition_day: alpha out of range");
  }
  std::vector<TimeInterval> out;
  for (double start = 0.0; start < kMinutesPerDay; start += alpha) {
    out.push_back({start, std::min(start + alpha, kMinutesPerDay)});
  }
  return out;
}

namespace {

LearnedVariable make_unit_variable(const Edge& edge, const TimeInterval& interval,
                                   const std::vector<CostVector>& qualified,
                                   const StoreParams& params) {
  const auto support = static_cast<std::int64_t>(qualified.size());
  if (support > params.beta) {
    std::vector<double> costs;
    costs.reserve(qualified.size());
    for (const auto& cv : qualified) costs.push_back(cv.costs[0]);
    return {Path{{edge.id}}, interval,
            HistogramND::from_1d(
                build_1d(costs, params.folds, params.sig, params.resolution),
                edge.id),
            support, VariableSource::kLearnedFromData};
  }
  const double c = edge.speed_limit_travel_time_s();
  return {Path{{edge.id}}, interval,
          HistogramND::from_1d(Histogram1D({{c, c + params.resolution}}, {1.0}),
                               edge.id),
          support, VariableSource::kSpeedLimitFallback};
}

double symmetric_kl(const HistogramND& a, const HistogramND& b) {
  return 0.5 * (kl_divergence(a, b) + kl_divergence(b, a));
}

// Greedy left-to-right merging of adjacent same-source similar intervals;
// restarts until a full pass applies no merge. rebuild() re-derives the
// histogram from the pooled samples of the merged interval.
void merge_adjacent(
    std::vector<LearnedVariable>& vars, double tau,
    const std::function<LearnedVariable(const TimeInterval&)>& rebuild) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < vars.size(); ++i) {
      const LearnedVariable& a = vars[i];
      const LearnedVariable& b = vars[i + 1];
      if (a.source != b.source) continue;
      if (a.interval.end != b.interval.start) continue;
      if (symmetric_kl(a.hist, b.hist) > tau) continue;
      LearnedVariable merged = rebuild({a.interval.start, b.interval.end});
      vars[i] = std::move(merged);
      vars.erase(vars.begin() + i + 1);
      changed = true;
      break;
    }
  }
}

}  // namespace

std::vector<LearnedVariable> learn_unit(const RoadNetwork& net,
                                        const TrajectoryStore& store,
                                        const EdgeId& edge_id,
                                        const StoreParams& params) {
  const Edge& edge = net.edge(edge_id);
  const Path unit{{edge_id}};
  const auto intervals = partition_day(params.alpha);
  const auto per_interval = store.qualified_partition(unit, intervals);

  std::vector<LearnedVariable> vars;
  vars.reserve(intervals.size());
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    vars.push_back(make_unit_variable(edge, intervals[k], per_interval[k], params));
  }
  merge_adjacent(vars, params.tau_merge, [&](const TimeInterval& merged) {
    return make_unit_variable(edge, merged, store.qualified(unit, merged), params);
  });
  return vars;
}

namespace {

LearnedVariable make_joint_variable(const Path& p, const TimeInterval& interval,
                                    const std::vector<CostVector>& qualified,
                                    const StoreParams& params) {
  std::vector<std::vector<double>> vectors;
  vectors.reserve(qualified.size());
  for (const auto& cv : qualified) vectors.push_back(cv.costs);
  return {p, interval,
          build_nd(vectors, p.edges, params.folds, params.sig, params.resolution),
          static_cast<std::int64_t>(qualified.size()),
          VariableSource::kLearnedFromData};
}

}  // namespace

std::vector<LearnedVariable> learn_joints(
    const RoadNetwork& net, const TrajectoryStore& store,
    const StoreParams& params, const std::vector<LearnedVariable>& unit_vars) {
  const auto intervals = partition_day(params.alpha);
  std::vector<LearnedVariable> out;

  // Paths with at least one learned-from-data variable at the previous rank.
  std::set<std::vector<EdgeId>> level;
  for (const auto& v : unit_vars) {
    if (v.source == VariableSource::kLearnedFromData) level.insert(v.path.edges);
  }

  while (!level.empty()) {
    // Combine pairs overlapping in all but their end edges: candidate paths
    // of rank k from rank k-1 prefixes/suffixes.
    std::set<std::vector<EdgeId>> candidates;
    for (const auto& a : level) {
      for (const auto& b : level) {
        if (a.size() != b.size()) continue;
        if (!std::equal(a.begin() + 1, a.end(), b.begin(), b.end() - 1)) continue;
        std::vector<EdgeId> joined = a;
        joined.push_back(b.back());
        if (net.make_path(joined)) candidates.insert(std::move(joined));
      }
    }
    if (candidates.empty()) break;

    std::vector<std::vector<EdgeId>> cand_list(candidates.begin(), candidates.end());
    std::vector<std::vector<LearnedVariable>> results(cand_list.size());
    parallel_for(cand_list.size(), params.threads, [&](std::size_t ci) {
      const Path p{cand_list[ci]};
      const auto per_interval = store.qualified_partition(p, intervals);
      std::vector<LearnedVariable> vars;
      for (std::size_t k = 0; k < intervals.size(); ++k) {
        if (static_cast<std::int64_t>(per_interval[k].size()) > params.beta) {
          vars.push_back(
              make_joint_variable(p, intervals[k], per_interval[k], params));
        }
      }
      merge_adjacent(vars, params.tau_merge, [&](const TimeInterval& merged) {
        return make_joint_variable(p, merged, store.qualified(p, merged), params);
      });
      results[ci] = std::move(vars);
    });

    std::set<std::vector<EdgeId>> next_level;
    for (std::size_t ci = 0; ci < cand_list.size(); ++ci) {
      if (!results[ci].empty()) next_level.insert(cand_list[ci]);
      for (auto& v : results[ci]) out.push_back(std::move(v));
    }
    level = std::move(next_level);
  }
  return out;
}

VariableStore build_store(const RoadNetwork& net, const TrajectoryStore& store,
                          const StoreParams& params) {
  const auto edges = net.edge_ids_sorted();
  std::vector<std::vector<LearnedVariable>> unit_results(edges.size());
  parallel_for(edges.size(), params.threads, [&](std::size_t i) {
    unit_results[i] = learn_unit(net, store, edges[i], params);
  });
  std::vector<LearnedVariable> vars;
  for (auto& r : unit_results) {
    for (auto& v : r) vars.push_back(std::move(v));
  }
  auto joints = learn_joints(net, store, params, vars);
  for (auto& v : joints) vars.push_back(std::move(v));
  return VariableStore(params, std::move(vars));
}

VariableStore::VariableStore(StoreParams params, std::vector<LearnedVariable> vars)
    : params_(std::move(params)), vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end(),
            [](const LearnedVariable& a, const LearnedVariable& b) {
              if (a.path.edges != b.path.edges) return a.path.edges < b.path.edges;
              return a.interval.start < b.interval.start;
            });
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    by_path_[vars_[i].path.edges].push_back(i);
    max_rank_ = std::max(max_rank_, vars_[i].rank());
  }
}

std::vector<const LearnedVariable*> VariableStore::for_path(
    const std::vector<EdgeId>& edges) const {
  std::vector<const LearnedVariable*> out;
  const auto it = by_path_.find(edges);
  if (it == by_path_.end()) return out;
  out.reserve(it->second.size());
  for (std::size_t i : it->second) out.push_back(&vars_[i]);
  return out;
}

std::map<std::size_t, std::size_t> VariableStore::rank_histogram() const {
  std::map<std::size_t, std::size_t> out;
  for (const auto& v : vars_) {
    if (v.source == VariableSource::kLearnedFromData) ++out[v.rank()];
  }
  return out;
}

}  // namespace pathcost
