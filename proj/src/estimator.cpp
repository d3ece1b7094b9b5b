#include "pathcost/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pathcost/kernels.hpp"
#include "pathcost/time_util.hpp"

namespace pathcost {

bool intersects(const ClosedInterval& w, const TimeInterval& i) {
  return w.lo < i.end && w.hi >= i.start;
}

double overlap_minutes(const ClosedInterval& w, const TimeInterval& i) {
  return std::max(0.0, std::min(w.hi, i.end) - std::max(w.lo, i.start));
}

ClosedInterval sae(const ClosedInterval& window, const LearnedVariable& v) {
  const double lo = window.lo + v.min_cost() / 60.0;
  const double hi = window.hi + v.max_cost() / 60.0;
  return {std::clamp(lo, 0.0, kMinutesPerDay), std::clamp(hi, 0.0, kMinutesPerDay)};
}

namespace {

// Rank-1 variable (learned or fallback) for the edge whose interval best
// overlaps the window; ties by earlier start.
const LearnedVariable* pick_unit(const VariableStore& store, const EdgeId& edge,
                                 const ClosedInterval& window) {
  const auto vars = store.for_path({edge});
  const LearnedVariable* best = nullptr;
  double best_overlap = -1.0;
  for (const LearnedVariable* v : vars) {
    if (!intersects(window, v->interval)) continue;
    const double ov = overlap_minutes(window, v->interval);
    if (ov > best_overlap) {
      best = v;
      best_overlap = ov;
    }
  }
  if (best) return best;
  // Degenerate window at the end of the day: fall back to containment of the
  // clamped window start.
  const double at = std::clamp(window.lo, 0.0, kMinutesPerDay - 1e-9);
  for (const LearnedVariable* v : vars) {
    if (v->interval.contains(at)) return v;
  }
  return nullptr;
}

}  // namespace

UnitChain chain_unit_windows(const VariableStore& store, const Path& p,
                             double depart_minute) {
  UnitChain chain;
  chain.windows.reserve(p.cardinality());
  chain.units.reserve(p.cardinality());
  ClosedInterval w{depart_minute, depart_minute};
  for (std::size_t i = 0; i < p.cardinality(); ++i) {
    chain.windows.push_back(w);
    const LearnedVariable* unit = pick_unit(store, p.edges[i], w);
    if (!unit) {
      throw EstimationError(EstimationError::Kind::kUncoverableEdge,
                            "no rank-1 variable for edge " + p.edges[i],
                            p.edges[i]);
    }
    chain.units.push_back(unit);
    w = sae(w, *unit);
  }
  return chain;
}

RelevantVariables relevant_variables(const Path& p, double depart_minute,
                                     const VariableStore& store) {
  RelevantVariables rel;
  rel.chain = chain_unit_windows(store, p, depart_minute);
  const std::size_t n = p.cardinality();
  rel.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 1; r + i <= n; ++r) {
      const std::vector<EdgeId> span(p.edges.begin() + i, p.edges.begin() + i + r);
      for (const LearnedVariable* v : store.for_path(span)) {
        if (v->source != VariableSource::kLearnedFromData) continue;
        if (!intersects(rel.chain.windows[i], v->interval)) continue;
        rel.rows[i].push_back(v);
      }
    }
  }
  return rel;
}

CandidateArray build_candidate_array(const Path& p, const RelevantVariables& rel) {
  CandidateArray array(p.cardinality());
  for (std::size_t i = 0; i < rel.rows.size(); ++i) {
    std::map<std::size_t, const LearnedVariable*> per_rank;
    for (const LearnedVariable* v : rel.rows[i]) {
      auto [it, inserted] = per_rank.try_emplace(v->rank(), v);
      if (inserted) continue;
      const LearnedVariable* cur = it->second;
      const double ov_new = overlap_minutes(rel.chain.windows[i], v->interval);
      const double ov_cur = overlap_minutes(rel.chain.windows[i], cur->interval);
      if (ov_new > ov_cur ||
          (ov_new == ov_cur && v->interval.start < cur->interval.start)) {
        it->second = v;
      }
    }
    for (const auto& [rank, v] : per_rank) array[i].push_back(v);
  }
  return array;
}

// ---------------------------------------------------------------------------
// Optimal CRV identification

std::optional<Crv> greedy_row_crv(const CandidateArray& array, std::size_t row,
                                  std::size_t n) {
  if (array[row].empty()) return std::nullopt;
  Crv crv{{array[row].back(), row}};
  std::size_t left = row;                       // first covered position
  std::size_t right = crv[0].end();             // one past last covered

  while (left > 0) {
    const CrvEntry& first = crv.front();
    const std::size_t first_end = first.end();  // one past
    const LearnedVariable* best = nullptr;
    std::size_t best_start = 0;
    for (std::size_t a = 0; a < left; ++a) {
      for (const LearnedVariable* v : array[a]) {
        const std::size_t e = a + v->rank();  // one past
        if (e < left || e > first_end) continue;
        if (!best || v->rank() > best->rank() ||
            (v->rank() == best->rank() && a < best_start)) {
          best = v;
          best_start = a;
        }
      }
    }
    if (!best) return std::nullopt;
    crv.insert(crv.begin(), {best, best_start});
    left = best_start;
  }

  while (right < n) {
    const CrvEntry& last = crv.back();
    const LearnedVariable* best = nullptr;
    std::size_t best_start = 0;
    for (std::size_t s = last.start; s <= right; ++s) {
      for (const LearnedVariable* v : array[s]) {
        if (s + v->rank() <= right) continue;  // must extend coverage
        if (!best || v->rank() > best->rank() ||
            (v->rank() == best->rank() && s < best_start)) {
          best = v;
          best_start = s;
        }
      }
    }
    if (!best) return std::nullopt;
    crv.push_back({best, best_start});
    right = crv.back().end();
  }
  return crv;
}

bool is_coarser(const Crv& a, const Crv& b) {
  for (const CrvEntry& pb : b) {
    bool contained = false;
    for (const CrvEntry& pa : a) {
      if (pa.start <= pb.start && pb.end() <= pa.end()) {
        contained = true;
        break;
      }
    }
    if (!contained) return false;
  }
  return true;
}

namespace {

std::vector<std::string> overlap_labels(const CrvEntry& a, const CrvEntry& b) {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end(), b.end());
  std::vector<std::string> labels;
  for (std::size_t q = lo; q < hi; ++q) {
    labels.push_back(b.var->path.edges[q - b.start]);
  }
  return labels;
}

}  // namespace

double crv_entropy(const Crv& crv) {
  double h = 0.0;
  for (std::size_t i = 0; i < crv.size(); ++i) {
    h += entropy(crv[i].var->hist);
    if (i > 0) {
      const auto shared = overlap_labels(crv[i - 1], crv[i]);
      if (!shared.empty()) {
        h -= entropy(marginalize_onto(crv[i].var->hist, shared));
      }
    }
  }
  return h;
}

Crv identify_crv_opt(const CandidateArray& array, const Path& p) {
  const std::size_t n = p.cardinality();
  // Every edge must be covered by at least one relevant variable.
  for (std::size_t i = 0; i < n; ++i) {
    bool covered = false;
    for (std::size_t s = 0; s <= i && !covered; ++s) {
      for (const LearnedVariable* v : array[s]) {
        if (s + v->rank() > i) {
          covered = true;
          break;
        }
      }
    }
    if (!covered) {
      throw EstimationError(EstimationError::Kind::kUncoverableEdge,
                            "edge " + p.edges[i] +
                                " not covered by any relevant variable",
                            p.edges[i]);
    }
  }

  std::vector<Crv> members;
  for (std::size_t row = 0; row < n; ++row) {
    auto d = greedy_row_crv(array, row, n);
    if (!d) continue;
    bool add = true;
    for (std::size_t k = 0; k < members.size();) {
      if (is_coarser(*d, members[k])) {
        members.erase(members.begin() + k);
      } else if (is_coarser(members[k], *d)) {
        add = false;
        break;
      } else {
        ++k;
      }
    }
    if (add) members.push_back(std::move(*d));
  }
  if (members.empty()) {
    throw EstimationError(EstimationError::Kind::kUncoverableEdge,
                          "no candidate variable set covers edge " + p.edges[0],
                          p.edges[0]);
  }
  std::size_t best = 0;
  double best_h = crv_entropy(members[0]);
  for (std::size_t k = 1; k < members.size(); ++k) {
    const double h = crv_entropy(members[k]);
    if (h < best_h) {
      best = k;
      best_h = h;
    }
  }
  return members[best];
}

bool satisfies_spatial_conditions(const Crv& crv, std::size_t n) {
  if (crv.empty()) return false;
  std::uint64_t mask = 0;
  std::uint64_t last = 0;
  const std::uint64_t full = n >= 64 ? ~0ull : ((1ull << n) - 1);
  for (const CrvEntry& e : crv) {
    if (e.end() > n) return false;
    std::uint64_t span = 0;
    for (std::size_t q = e.start; q < e.end(); ++q) span |= 1ull << q;
    if ((span & mask) != (span & last)) return false;
    mask |= span;
    last = span;
  }
  return mask == full;
}

bool satisfies_temporal_condition(const Crv& crv, const Path& p,
                                  double depart_minute,
                                  const VariableStore& store) {
  const UnitChain chain = chain_unit_windows(store, p, depart_minute);
  for (const CrvEntry& e : crv) {
    if (!intersects(chain.windows[e.start], e.var->interval)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Composition (Eq. 2 style conditional chaining)

namespace {

std::vector<double> merged_grid(const std::vector<double>& a,
                                const std::vector<double>& b) {
  std::vector<double> g;
  g.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(g));
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::size_t dim_index(const HistogramND& h, const std::string& label) {
  const auto it = std::find(h.dims().begin(), h.dims().end(), label);
  return static_cast<std::size_t>(it - h.dims().begin());
}

HistogramND normalized_nd(std::vector<std::string> dims,
                          std::vector<std::vector<double>> bounds,
                          std::map<std::vector<std::uint32_t>, double>& mass) {
  double total = 0.0;
  for (const auto& [k, pr] : mass) total += pr;
  if (!(total > 0.0)) {
    throw EstimationError(EstimationError::Kind::kInconsistentComposition,
                          "composed joint has zero total mass");
  }
  std::vector<NdCell> cells;
  cells.reserve(mass.size());
  for (const auto& [k, pr] : mass) {
    if (pr > 0.0) cells.push_back({k, pr / total});
  }
  return HistogramND(std::move(dims), std::move(bounds), std::move(cells));
}

}  // namespace

HistogramND estimate_joint(const Crv& crv) {
  if (crv.empty()) {
    throw EstimationError(EstimationError::Kind::kInconsistentComposition,
                          "empty candidate variable set");
  }
  HistogramND state = crv[0].var->hist;
  for (std::size_t h = 1; h < crv.size(); ++h) {
    const auto shared = overlap_labels(crv[h - 1], crv[h]);
    const HistogramND& vh = crv[h].var->hist;

    // Refine both operands to common grids on the shared dimensions.
    auto state_grids = state.boundaries();
    auto vh_grids = vh.boundaries();
    for (const auto& label : shared) {
      const std::size_t si = dim_index(state, label);
      const std::size_t vi = dim_index(vh, label);
      const auto u = merged_grid(state_grids[si], vh_grids[vi]);
      state_grids[si] = u;
      vh_grids[vi] = u;
    }
    const HistogramND sr = refine_nd(state, state_grids);
    const HistogramND vr = refine_nd(vh, vh_grids);

    // Group the new variable's cells by shared-dimension indices.
    std::vector<std::size_t> v_shared_dims, v_new_dims;
    for (std::size_t d = 0; d < vr.dim_count(); ++d) {
      if (std::find(shared.begin(), shared.end(), vr.dims()[d]) != shared.end()) {
        v_shared_dims.push_back(d);
      } else {
        v_new_dims.push_back(d);
      }
    }
    std::map<std::vector<std::uint32_t>, std::vector<const NdCell*>> groups;
    std::map<std::vector<std::uint32_t>, double> denom;
    for (const auto& c : vr.cells()) {
      std::vector<std::uint32_t> key;
      key.reserve(v_shared_dims.size());
      for (std::size_t d : v_shared_dims) key.push_back(c.idx[d]);
      groups[key].push_back(&c);
      denom[key] += c.pr;
    }

    std::vector<std::size_t> s_shared_dims;
    for (const auto& label : shared) s_shared_dims.push_back(dim_index(sr, label));

    std::vector<std::string> dims = sr.dims();
    auto bounds = sr.boundaries();
    for (std::size_t d : v_new_dims) {
      dims.push_back(vr.dims()[d]);
      bounds.push_back(vr.boundaries(d));
    }

    std::map<std::vector<std::uint32_t>, double> mass;
    std::vector<std::uint32_t> key;
    for (const auto& sc : sr.cells()) {
      key.clear();
      for (std::size_t d : s_shared_dims) key.push_back(sc.idx[d]);
      const auto git = groups.find(key);
      if (git == groups.end()) continue;  // zero shared marginal: contributes 0
      const double m = denom[key];
      for (const NdCell* vc : git->second) {
        std::vector<std::uint32_t> idx = sc.idx;
        for (std::size_t d : v_new_dims) idx.push_back(vc->idx[d]);
        mass[std::move(idx)] += sc.pr * vc->pr / m;
      }
    }
    state = normalized_nd(std::move(dims), std::move(bounds), mass);
  }

  // Reorder dimensions by query-path position.
  std::map<std::string, std::size_t> pos;
  for (const CrvEntry& e : crv) {
    for (std::size_t k = 0; k < e.var->rank(); ++k) {
      pos[e.var->path.edges[k]] = e.start + k;
    }
  }
  std::vector<std::size_t> perm(state.dim_count());
  for (std::size_t d = 0; d < state.dim_count(); ++d) perm[d] = d;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return pos[state.dims()[a]] < pos[state.dims()[b]];
  });
  std::vector<std::string> dims;
  std::vector<std::vector<double>> bounds;
  for (std::size_t d : perm) {
    dims.push_back(state.dims()[d]);
    bounds.push_back(state.boundaries(d));
  }
  std::vector<NdCell> cells;
  cells.reserve(state.cells().size());
  for (const auto& c : state.cells()) {
    NdCell nc;
    nc.pr = c.pr;
    nc.idx.reserve(c.idx.size());
    for (std::size_t d : perm) nc.idx.push_back(c.idx[d]);
    cells.push_back(std::move(nc));
  }
  return HistogramND(std::move(dims), std::move(bounds), std::move(cells));
}

// ---------------------------------------------------------------------------
// Eliminated-form marginal

namespace {

struct AccKey {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint32_t> sidx;

  bool operator<(const AccKey& o) const {
    if (lo != o.lo) return lo < o.lo;
    if (hi != o.hi) return hi < o.hi;
    return sidx < o.sidx;
  }
};

using AccState = std::map<AccKey, double>;

// (refined index, fraction) splits of each original bucket of `from` on the
// refined grid `to` (a superset of `from`).
std::vector<std::vector<std::pair<std::uint32_t, double>>> split_map(
    const std::vector<double>& from, const std::vector<double>& to) {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out(from.size() - 1);
  for (std::size_t i = 0; i + 1 < from.size(); ++i) {
    const double lo = from[i], hi = from[i + 1];
    const auto a = std::lower_bound(to.begin(), to.end(), lo);
    const auto b = std::lower_bound(to.begin(), to.end(), hi);
    for (auto it = a; it != b; ++it) {
      out[i].emplace_back(static_cast<std::uint32_t>(it - to.begin()),
                          (*(it + 1) - *it) / (hi - lo));
    }
  }
  return out;
}

// Lossy compaction: rebucket the (acc, pr) pairs of one shared cell onto
// their disjoint boundary union.
std::vector<std::pair<Bucket, double>> compact_pairs(
    const std::vector<std::pair<Bucket, double>>& pairs) {
  std::vector<double> bounds;
  bounds.reserve(pairs.size() * 2);
  for (const auto& [b, pr] : pairs) {
    bounds.push_back(b.lo);
    bounds.push_back(b.hi);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  const std::size_t nseg = bounds.size() - 1;
  std::vector<double> acc(nseg, 0.0);
  for (const auto& [b, pr] : pairs) {
    kernels::overlap_add(acc.data(), bounds.data(), nseg, b.lo, b.hi, pr);
  }
  std::vector<std::pair<Bucket, double>> out;
  for (std::size_t k = 0; k < nseg; ++k) {
    if (acc[k] > 0.0) out.push_back({{bounds[k], bounds[k + 1]}, acc[k]});
  }
  return out;
}

}  // namespace

Histogram1D estimate_marginal(const Crv& crv, std::size_t compact_threshold) {
  if (crv.empty()) {
    throw EstimationError(EstimationError::Kind::kInconsistentComposition,
                          "empty candidate variable set");
  }

  // Retained (shared-with-next) labels after step h.
  const auto retained_after = [&](std::size_t h) -> std::vector<std::string> {
    if (h + 1 >= crv.size()) return {};
    return overlap_labels(crv[h], crv[h + 1]);
  };

  AccState state;
  std::vector<std::string> r_labels = retained_after(0);
  std::vector<std::vector<double>> r_grids;

  {
    const HistogramND& v0 = crv[0].var->hist;
    std::vector<std::size_t> elim;
    for (std::size_t d = 0; d < v0.dim_count(); ++d) {
      if (std::find(r_labels.begin(), r_labels.end(), v0.dims()[d]) ==
          r_labels.end()) {
        elim.push_back(d);
      }
    }
    r_grids.clear();
    for (const auto& label : r_labels) r_grids.push_back(v0.boundaries(dim_index(v0, label)));
    for (const auto& c : v0.cells()) {
      AccKey k;
      for (std::size_t d : elim) {
        k.lo += v0.boundaries(d)[c.idx[d]];
        k.hi += v0.boundaries(d)[c.idx[d] + 1];
      }
      for (const auto& label : r_labels) k.sidx.push_back(c.idx[dim_index(v0, label)]);
      state[k] += c.pr;
    }
  }

  for (std::size_t h = 1; h < crv.size(); ++h) {
    const auto shared = overlap_labels(crv[h - 1], crv[h]);
    const HistogramND& vh = crv[h].var->hist;

    // shared == r_labels by construction (condition iii).
    auto vh_grids = vh.boundaries();
    std::vector<std::vector<std::vector<std::pair<std::uint32_t, double>>>> splits(
        shared.size());
    for (std::size_t s = 0; s < shared.size(); ++s) {
      const std::size_t vi = dim_index(vh, shared[s]);
      const auto u = merged_grid(r_grids[s], vh_grids[vi]);
      splits[s] = split_map(r_grids[s], u);
      vh_grids[vi] = u;
    }
    const HistogramND vr = refine_nd(vh, vh_grids);

    std::vector<std::size_t> v_shared_dims;
    for (const auto& label : shared) v_shared_dims.push_back(dim_index(vr, label));
    const auto next_labels = retained_after(h);
    std::vector<std::size_t> v_next_dims, v_elim_dims;
    for (std::size_t d = 0; d < vr.dim_count(); ++d) {
      if (std::find(next_labels.begin(), next_labels.end(), vr.dims()[d]) !=
          next_labels.end()) {
        v_next_dims.push_back(d);
      } else {
        v_elim_dims.push_back(d);
      }
    }

    std::map<std::vector<std::uint32_t>, std::vector<const NdCell*>> groups;
    std::map<std::vector<std::uint32_t>, double> denom;
    for (const auto& c : vr.cells()) {
      std::vector<std::uint32_t> key;
      key.reserve(v_shared_dims.size());
      for (std::size_t d : v_shared_dims) key.push_back(c.idx[d]);
      groups[key].push_back(&c);
      denom[key] += c.pr;
    }

    AccState next;
    std::vector<std::uint32_t> skey(shared.size());
    // Expand each state cell over the refined shared grid, then join.
    for (const auto& [k, pr] : state) {
      std::vector<std::size_t> at(shared.size(), 0);
      while (true) {
        double f = pr;
        for (std::size_t s = 0; s < shared.size(); ++s) {
          const auto& sp = splits[s][k.sidx[s]];
          skey[s] = sp[at[s]].first;
          f *= sp[at[s]].second;
        }
        const auto git = groups.find(skey);
        if (git != groups.end()) {
          const double m = denom[skey];
          for (const NdCell* vc : git->second) {
            AccKey nk;
            nk.lo = k.lo;
            nk.hi = k.hi;
            for (std::size_t d : v_elim_dims) {
              nk.lo += vr.boundaries(d)[vc->idx[d]];
              nk.hi += vr.boundaries(d)[vc->idx[d] + 1];
            }
            nk.sidx.reserve(v_next_dims.size());
            for (std::size_t d : v_next_dims) nk.sidx.push_back(vc->idx[d]);
            next[nk] += f * vc->pr / m;
          }
        }
        std::size_t s = 0;
        for (; s < shared.size(); ++s) {
          if (++at[s] < splits[s][k.sidx[s]].size()) break;
          at[s] = 0;
        }
        if (s == shared.size()) break;
      }
    }

    // Optional compaction per shared cell when the state grows too large.
    if (compact_threshold > 0 && next.size() > compact_threshold) {
      std::map<std::vector<std::uint32_t>, std::vector<std::pair<Bucket, double>>>
          by_sidx;
      for (const auto& [k, pr] : next) {
        by_sidx[k.sidx].push_back({{k.lo, k.hi}, pr});
      }
      bool compacted = false;
      AccState rebuilt;
      for (auto& [sidx, pairs] : by_sidx) {
        if (pairs.size() > compact_threshold) {
          pairs = compact_pairs(pairs);
          compacted = true;
        }
        for (const auto& [b, pr] : pairs) rebuilt[{b.lo, b.hi, sidx}] += pr;
      }
      if (compacted) next = std::move(rebuilt);
    }

    state = std::move(next);
    double total = 0.0;
    for (const auto& [k, pr] : state) total += pr;
    if (!(total > 0.0)) {
      throw EstimationError(EstimationError::Kind::kInconsistentComposition,
                            "composed joint has zero total mass");
    }
    for (auto& [k, pr] : state) pr /= total;

    r_labels = next_labels;
    r_grids.clear();
    for (const auto& label : next_labels) {
      r_grids.push_back(vr.boundaries(dim_index(vr, label)));
    }
  }

  double total = 0.0;
  for (const auto& [k, pr] : state) total += pr;
  if (!(total > 0.0)) {
    throw EstimationError(EstimationError::Kind::kInconsistentComposition,
                          "composed joint has zero total mass");
  }
  std::vector<WeightedBucket> pairs;
  pairs.reserve(state.size());
  for (const auto& [k, pr] : state) {
    pairs.push_back({{k.lo, k.hi}, pr / total});
  }
  return rearrange(pairs);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

namespace {

void enumerate_dfs(const std::vector<CrvEntry>& items, std::uint64_t full,
                   std::uint64_t mask, std::uint64_t last, Crv& current,
                   std::vector<Crv>& out, std::size_t limit, bool* overflow) {
  if (mask == full) {
    if (out.size() < limit) {
      out.push_back(current);
    } else if (overflow) {
      *overflow = true;
    }
    return;
  }
  if (overflow && *overflow) return;
  for (const CrvEntry& item : items) {
    std::uint64_t span = 0;
    for (std::size_t q = item.start; q < item.end(); ++q) span |= 1ull << q;
    if ((span & ~mask) == 0) continue;          // must contribute a new edge
    if ((span & mask) != (span & last)) continue;  // overlap only with last
    current.push_back(item);
    enumerate_dfs(items, full, mask | span, span, current, out, limit, overflow);
    current.pop_back();
    if (overflow && *overflow) return;
  }
}

}  // namespace

std::vector<Crv> enumerate_valid_crvs(const CandidateArray& array,
                                      std::size_t n, std::size_t limit,
                                      bool* overflow) {
  std::vector<CrvEntry> items;
  for (std::size_t s = 0; s < array.size(); ++s) {
    for (const LearnedVariable* v : array[s]) items.push_back({v, s});
  }
  const std::uint64_t full = n >= 64 ? ~0ull : ((1ull << n) - 1);
  std::vector<Crv> out;
  Crv current;
  if (overflow) *overflow = false;
  enumerate_dfs(items, full, 0, 0, current, out, limit, overflow);
  return out;
}

EstimationResult estimate(const VariableStore& store, const Path& p,
                          double depart_minute) {
  const auto rel = relevant_variables(p, depart_minute, store);
  const auto array = build_candidate_array(p, rel);
  Crv crv = identify_crv_opt(array, p);
  Histogram1D marginal = estimate_marginal(crv);
  return {std::move(marginal), crv_entropy(crv), std::move(crv), "ocrv"};
}

}  // namespace pathcost
