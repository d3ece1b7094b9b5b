#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oracles {

namespace {

struct DistinctValues {
  std::vector<double> values;
  std::vector<double> counts;
};

DistinctValues distinct_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  DistinctValues d;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    d.values.push_back(values[i]);
    d.counts.push_back(static_cast<double>(j - i));
    i = j;
  }
  return d;
}

double group_sse(const DistinctValues& d, int lo, int hi) {  // [lo, hi)
  double w = 0.0, s = 0.0;
  for (int k = lo; k < hi; ++k) {
    w += d.counts[k];
    s += d.counts[k] * d.values[k];
  }
  const double mean = s / w;
  double sse = 0.0;
  for (int k = lo; k < hi; ++k) {
    sse += d.counts[k] * (d.values[k] - mean) * (d.values[k] - mean);
  }
  return sse;
}

}  // namespace

double brute_force_vopt_sse(const std::vector<double>& values, int buckets) {
  const DistinctValues d = distinct_of(values);
  const int n = static_cast<int>(d.values.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> starts{0};
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(starts.size()) == buckets) {
      double sse = 0.0;
      for (std::size_t g = 0; g < starts.size(); ++g) {
        const int lo = starts[g];
        const int hi = g + 1 < starts.size() ? starts[g + 1] : n;
        sse += group_sse(d, lo, hi);
      }
      best = std::min(best, sse);
      return;
    }
    const int remaining = buckets - static_cast<int>(starts.size());
    for (int s = from; s <= n - remaining; ++s) {
      starts.push_back(s);
      rec(s + 1);
      starts.pop_back();
    }
  };
  rec(1);
  return best;
}

std::vector<int> brute_force_vopt_groups(const std::vector<double>& values,
                                         int buckets) {
  const DistinctValues d = distinct_of(values);
  const int n = static_cast<int>(d.values.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_starts;
  std::vector<int> starts{0};
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(starts.size()) == buckets) {
      double sse = 0.0;
      for (std::size_t g = 0; g < starts.size(); ++g) {
        const int lo = starts[g];
        const int hi = g + 1 < starts.size() ? starts[g + 1] : n;
        sse += group_sse(d, lo, hi);
      }
      if (sse < best) {
        best = sse;
        best_starts = starts;
      }
      return;
    }
    const int remaining = buckets - static_cast<int>(starts.size());
    for (int s = from; s <= n - remaining; ++s) {
      starts.push_back(s);
      rec(s + 1);
      starts.pop_back();
    }
  };
  rec(1);
  return best_starts;
}

double mc_sum_mass(const pathcost::Histogram1D& a, const pathcost::Histogram1D& b,
                   double lo, double hi, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto draw = [&](const pathcost::Histogram1D& h) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(rng);
    std::size_t i = 0;
    while (i + 1 < h.size() && r >= h.probabilities()[i]) {
      r -= h.probabilities()[i];
      ++i;
    }
    std::uniform_real_distribution<double> v(h.buckets()[i].lo, h.buckets()[i].hi);
    return v(rng);
  };
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = draw(a) + draw(b);
    if (x >= lo && x < hi) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

std::map<long, double> fine_grid_marginal(const pathcost::HistogramND& h,
                                          double resolution, double* origin) {
  const double base = std::floor(h.min_total_cost() / resolution) * resolution;
  if (origin) *origin = base;
  std::map<long, double> grid;
  for (const auto& cell : h.cells()) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t d = 0; d < h.dim_count(); ++d) {
      lo += h.boundaries(d)[cell.idx[d]];
      hi += h.boundaries(d)[cell.idx[d] + 1];
    }
    const long k0 = static_cast<long>(std::floor((lo - base) / resolution));
    const long k1 = static_cast<long>(std::ceil((hi - base) / resolution));
    for (long k = k0; k < k1; ++k) {
      const double a = std::max(lo, base + k * resolution);
      const double b = std::min(hi, base + (k + 1) * resolution);
      if (b > a) grid[k] += cell.pr * (b - a) / (hi - lo);
    }
  }
  return grid;
}

double mass_on(const pathcost::Histogram1D& h, double lo, double hi) {
  double m = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& b = h.buckets()[i];
    const double a = std::max(lo, b.lo);
    const double c = std::min(hi, b.hi);
    if (c > a) m += h.probabilities()[i] * (c - a) / b.width();
  }
  return m;
}

// ---------------------------------------------------------------------------

std::size_t DiscreteJoint::index(const std::vector<std::size_t>& idx) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < idx.size(); ++d) {
    flat = flat * values[d].size() + idx[d];
  }
  return flat;
}

double DiscreteJoint::entropy() const {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

DiscreteJoint DiscreteJoint::marginal(std::size_t pos, std::size_t len) const {
  DiscreteJoint out;
  out.edges.assign(edges.begin() + pos, edges.begin() + pos + len);
  out.values.assign(values.begin() + pos, values.begin() + pos + len);
  std::size_t out_size = 1;
  for (const auto& v : out.values) out_size *= v.size();
  out.probs.assign(out_size, 0.0);

  std::vector<std::size_t> idx(edges.size(), 0);
  for (std::size_t flat = 0; flat < probs.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t d = edges.size(); d-- > 0;) {
      idx[d] = rem % values[d].size();
      rem /= values[d].size();
    }
    std::size_t out_flat = 0;
    for (std::size_t d = 0; d < len; ++d) {
      out_flat = out_flat * out.values[d].size() + idx[pos + d];
    }
    out.probs[out_flat] += probs[flat];
  }
  return out;
}

pathcost::HistogramND DiscreteJoint::to_histogram() const {
  std::vector<std::vector<double>> boundaries(values.size());
  for (std::size_t d = 0; d < values.size(); ++d) {
    boundaries[d] = values[d];
    boundaries[d].push_back(values[d].back() + 1.0);
  }
  std::vector<pathcost::NdCell> cells;
  std::vector<std::size_t> idx(values.size(), 0);
  for (std::size_t flat = 0; flat < probs.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t d = values.size(); d-- > 0;) {
      idx[d] = rem % values[d].size();
      rem /= values[d].size();
    }
    if (probs[flat] > 0.0) {
      pathcost::NdCell c;
      for (std::size_t v : idx) c.idx.push_back(static_cast<std::uint32_t>(v));
      c.pr = probs[flat];
      cells.push_back(std::move(c));
    }
  }
  return pathcost::HistogramND(edges, std::move(boundaries), std::move(cells));
}

DiscreteJoint random_joint(std::size_t edge_count, std::size_t max_values,
                           std::mt19937_64& rng) {
  DiscreteJoint j;
  std::uniform_int_distribution<std::size_t> nv(2, max_values);
  std::size_t total = 1;
  for (std::size_t d = 0; d < edge_count; ++d) {
    j.edges.push_back("e" + std::to_string(d + 1));
    const std::size_t k = nv(rng);
    std::set<int> levels;
    std::uniform_int_distribution<int> lv(10, 99);
    while (levels.size() < k) levels.insert(lv(rng));
    j.values.emplace_back(levels.begin(), levels.end());
    total *= k;
  }
  std::uniform_real_distribution<double> u(0.05, 1.0);
  j.probs.resize(total);
  double sum = 0.0;
  for (auto& p : j.probs) {
    p = u(rng);
    sum += p;
  }
  for (auto& p : j.probs) p /= sum;
  return j;
}

pathcost::VariableStore consistent_store(
    const DiscreteJoint& joint,
    const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
  std::vector<pathcost::LearnedVariable> vars;
  for (const auto& [pos, len] : spans) {
    const DiscreteJoint m = joint.marginal(pos, len);
    std::vector<pathcost::EdgeId> edges(joint.edges.begin() + pos,
                                        joint.edges.begin() + pos + len);
    vars.push_back({pathcost::Path{edges},
                    pathcost::TimeInterval{0.0, 1440.0},
                    m.to_histogram(),
                    1000,
                    pathcost::VariableSource::kLearnedFromData});
  }
  pathcost::StoreParams params;
  params.alpha = 1440.0;
  return pathcost::VariableStore(params, std::move(vars));
}

std::vector<pathcost::Crv> enumerate_crvs_oracle(
    const pathcost::CandidateArray& array, std::size_t n,
    std::size_t step_limit) {
  std::vector<pathcost::CrvEntry> items;
  for (std::size_t s = 0; s < array.size(); ++s) {
    for (const pathcost::LearnedVariable* v : array[s]) items.push_back({v, s});
  }
  std::vector<pathcost::Crv> out;
  pathcost::Crv current;
  std::size_t steps = 0;

  std::function<void(const std::set<std::size_t>&, const std::set<std::size_t>&)>
      rec = [&](const std::set<std::size_t>& covered,
                const std::set<std::size_t>& last) {
        if (++steps > step_limit) {
          throw std::runtime_error("oracle enumeration step limit exceeded");
        }
        if (covered.size() == n) {
          out.push_back(current);
          return;
        }
        for (const auto& item : items) {
          std::set<std::size_t> span;
          for (std::size_t q = item.start; q < item.end(); ++q) span.insert(q);
          bool adds_new = false;
          for (std::size_t q : span) {
            if (!covered.count(q)) {
              adds_new = true;
              break;
            }
          }
          if (!adds_new) continue;
          std::set<std::size_t> with_covered, with_last;
          for (std::size_t q : span) {
            if (covered.count(q)) with_covered.insert(q);
            if (last.count(q)) with_last.insert(q);
          }
          if (with_covered != with_last) continue;
          std::set<std::size_t> next_covered = covered;
          next_covered.insert(span.begin(), span.end());
          current.push_back(item);
          rec(next_covered, span);
          current.pop_back();
        }
      };
  rec({}, {});
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracles
