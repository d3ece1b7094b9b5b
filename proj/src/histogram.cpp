#include "pathcost/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "pathcost/kernels.hpp"

namespace pathcost {

namespace {

constexpr double kEps = 1e-9;

void check(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

RawDistribution raw_distribution(std::vector<double> values) {
  check(!values.empty(), "raw_distribution: empty values");
  std::sort(values.begin(), values.end());
  RawDistribution out;
  const double n = static_cast<double>(values.size());
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    out.emplace_back(values[i], static_cast<double>(j - i) / n);
    i = j;
  }
  return out;
}

Histogram1D::Histogram1D(std::vector<Bucket> buckets,
                         std::vector<double> probabilities) {
  check(buckets.size() == probabilities.size() && !buckets.empty(),
        "Histogram1D: bucket/probability size mismatch");
  buckets_.reserve(buckets.size());
  prs_.reserve(buckets.size());
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    check(buckets[i].lo < buckets[i].hi, "Histogram1D: bucket lo >= hi");
    check(probabilities[i] >= -1e-12, "Histogram1D: negative probability");
    if (i + 1 < buckets.size()) {
      check(buckets[i].hi <= buckets[i + 1].lo + 1e-12,
            "Histogram1D: buckets overlap or unsorted");
    }
    if (probabilities[i] > 0.0) {
      buckets_.push_back(buckets[i]);
      prs_.push_back(probabilities[i]);
    }
  }
  check(!buckets_.empty(), "Histogram1D: all-zero probabilities");
  const double total = kernels::sum(prs_.data(), prs_.size());
  check(std::abs(total - 1.0) <= kMassTolerance,
        "Histogram1D: probabilities do not sum to 1");
}

double Histogram1D::mass_below(double x) const {
  double m = 0.0;
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    const Bucket& b = buckets_[i];
    if (x >= b.hi) {
      m += prs_[i];
    } else if (x > b.lo) {
      m += prs_[i] * (x - b.lo) / b.width();
    } else {
      break;
    }
  }
  return m;
}

std::vector<double> Histogram1D::boundaries() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    if (out.empty() || out.back() != buckets_[i].lo) out.push_back(buckets_[i].lo);
    out.push_back(buckets_[i].hi);
  }
  return out;
}

HistogramND::HistogramND(std::vector<std::string> dims,
                         std::vector<std::vector<double>> boundaries,
                         std::vector<NdCell> cells)
    : dims_(std::move(dims)), boundaries_(std::move(boundaries)) {
  check(!dims_.empty(), "HistogramND: no dimensions");
  check(dims_.size() == boundaries_.size(),
        "HistogramND: dims/boundaries size mismatch");
  for (const auto& bd : boundaries_) {
    check(bd.size() >= 2, "HistogramND: dimension needs at least one bucket");
    for (std::size_t i = 0; i + 1 < bd.size(); ++i) {
      check(bd[i] < bd[i + 1], "HistogramND: boundaries not ascending");
    }
  }
  cells_.reserve(cells.size());
  for (auto& c : cells) {
    check(c.idx.size() == dims_.size(), "HistogramND: cell arity mismatch");
    for (std::size_t d = 0; d < dims_.size(); ++d) {
      check(c.idx[d] + 1 < boundaries_[d].size(), "HistogramND: cell out of grid");
    }
    check(c.pr >= -1e-12, "HistogramND: negative probability");
    if (c.pr > 0.0) cells_.push_back(std::move(c));
  }
  check(!cells_.empty(), "HistogramND: no mass");
  std::sort(cells_.begin(), cells_.end(),
            [](const NdCell& a, const NdCell& b) { return a.idx < b.idx; });
  for (std::size_t i = 0; i + 1 < cells_.size(); ++i) {
    check(cells_[i].idx != cells_[i + 1].idx, "HistogramND: duplicate cell");
  }
  std::vector<double> prs;
  prs.reserve(cells_.size());
  for (const auto& c : cells_) prs.push_back(c.pr);
  const double total = kernels::sum(prs.data(), prs.size());
  check(std::abs(total - 1.0) <= kMassTolerance,
        "HistogramND: probabilities do not sum to 1");
}

HistogramND HistogramND::from_1d(const Histogram1D& h, std::string dim) {
  // The 1-d grid includes gap edges; gap segments simply carry no cell.
  std::vector<double> bounds = h.boundaries();
  std::vector<NdCell> cells;
  const auto& bk = h.buckets();
  for (std::size_t i = 0; i < bk.size(); ++i) {
    const auto it = std::lower_bound(bounds.begin(), bounds.end(), bk[i].lo);
    cells.push_back(
        {{static_cast<std::uint32_t>(it - bounds.begin())}, h.probabilities()[i]});
  }
  return HistogramND({std::move(dim)}, {std::move(bounds)}, std::move(cells));
}

Histogram1D HistogramND::to_1d() const {
  check(dims_.size() == 1, "to_1d: not one-dimensional");
  std::vector<Bucket> bks;
  std::vector<double> prs;
  for (const auto& c : cells_) {
    bks.push_back(bucket(0, c.idx[0]));
    prs.push_back(c.pr);
  }
  return Histogram1D(std::move(bks), std::move(prs));
}

Bucket HistogramND::bucket(std::size_t dim, std::uint32_t idx) const {
  return {boundaries_[dim][idx], boundaries_[dim][idx + 1]};
}

HyperBucket HistogramND::hyper_bucket(const NdCell& cell) const {
  HyperBucket hb;
  hb.reserve(dims_.size());
  for (std::size_t d = 0; d < dims_.size(); ++d) hb.push_back(bucket(d, cell.idx[d]));
  return hb;
}

double HistogramND::min_total_cost() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cells_) {
    double s = 0.0;
    for (std::size_t d = 0; d < dims_.size(); ++d) s += boundaries_[d][c.idx[d]];
    best = std::min(best, s);
  }
  return best;
}

double HistogramND::max_total_cost() const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : cells_) {
    double s = 0.0;
    for (std::size_t d = 0; d < dims_.size(); ++d) s += boundaries_[d][c.idx[d] + 1];
    best = std::max(best, s);
  }
  return best;
}

// ---------------------------------------------------------------------------
// V-Optimal

namespace {

struct VoptTable {
  std::vector<double> distinct;
  std::vector<double> W, S, Q;  // count-weighted prefix sums, size n+1
  int n = 0;
  int bmax = 0;
  std::vector<double> err;  // (bmax+1) x (n+1)
  std::vector<int> split;   // (bmax+1) x (n+1)

  double& E(int k, int i) { return err[static_cast<std::size_t>(k) * (n + 1) + i]; }
  int& J(int k, int i) { return split[static_cast<std::size_t>(k) * (n + 1) + i]; }
  double E(int k, int i) const { return err[static_cast<std::size_t>(k) * (n + 1) + i]; }
  int J(int k, int i) const { return split[static_cast<std::size_t>(k) * (n + 1) + i]; }
};

// Within-group squared error of distinct values [j, i) around their
// count-weighted mean, from prefix sums.
double group_sse(const VoptTable& t, int j, int i) {
  const double dw = t.W[i] - t.W[j];
  const double ds = t.S[i] - t.S[j];
  return (t.Q[i] - t.Q[j]) - (ds * ds) / dw;
}

VoptTable build_vopt_table(std::vector<double> values, int bmax) {
  std::sort(values.begin(), values.end());
  VoptTable t;
  std::size_t i = 0;
  std::vector<double> counts;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    t.distinct.push_back(values[i]);
    counts.push_back(static_cast<double>(j - i));
    i = j;
  }
  t.n = static_cast<int>(t.distinct.size());
  t.bmax = std::min(bmax, t.n);
  t.W.assign(t.n + 1, 0.0);
  t.S.assign(t.n + 1, 0.0);
  t.Q.assign(t.n + 1, 0.0);
  for (int k = 0; k < t.n; ++k) {
    t.W[k + 1] = t.W[k] + counts[k];
    t.S[k + 1] = t.S[k] + counts[k] * t.distinct[k];
    t.Q[k + 1] = t.Q[k] + counts[k] * t.distinct[k] * t.distinct[k];
  }
  t.err.assign(static_cast<std::size_t>(t.bmax + 1) * (t.n + 1),
               std::numeric_limits<double>::infinity());
  t.split.assign(static_cast<std::size_t>(t.bmax + 1) * (t.n + 1), -1);
  for (int e = 1; e <= t.n; ++e) {
    t.E(1, e) = group_sse(t, 0, e);
    t.J(1, e) = 0;
  }
  for (int k = 2; k <= t.bmax; ++k) {
    const double* dp = &t.err[static_cast<std::size_t>(k - 1) * (t.n + 1)];
    for (int e = k; e <= t.n; ++e) {
      const auto best = kernels::vopt_best_split(
          dp, t.W.data(), t.S.data(), t.Q.data(), static_cast<std::size_t>(e),
          static_cast<std::size_t>(k - 1), static_cast<std::size_t>(e));
      t.E(k, e) = best.value;
      t.J(k, e) = static_cast<int>(best.index);
    }
  }
  return t;
}

Histogram1D histogram_from_table(const VoptTable& t, int b, double resolution) {
  // Recover group starts by walking the split table backwards.
  std::vector<int> starts(b);
  int e = t.n;
  for (int k = b; k >= 1; --k) {
    starts[k - 1] = t.J(k, e);
    e = starts[k - 1];
  }
  std::vector<Bucket> buckets;
  std::vector<double> prs;
  const double total = t.W[t.n];
  for (int k = 0; k < b; ++k) {
    const int s = starts[k];
    const int next = (k + 1 < b) ? starts[k + 1] : t.n;
    const double lo = t.distinct[s];
    const double hi =
        (next < t.n) ? t.distinct[next] : t.distinct[t.n - 1] + resolution;
    buckets.push_back({lo, hi});
    prs.push_back((t.W[next] - t.W[s]) / total);
  }
  return Histogram1D(std::move(buckets), std::move(prs));
}

}  // namespace

Histogram1D v_optimal(std::vector<double> values, int bucket_count,
                      double resolution) {
  check(!values.empty(), "v_optimal: empty values");
  check(bucket_count >= 1, "v_optimal: bucket count < 1");
  VoptTable t = build_vopt_table(std::move(values), bucket_count);
  check(bucket_count <= t.n, "v_optimal: more buckets than distinct values");
  return histogram_from_table(t, bucket_count, resolution);
}

double v_optimal_sse(std::vector<double> values, int bucket_count) {
  check(!values.empty(), "v_optimal_sse: empty values");
  check(bucket_count >= 1, "v_optimal_sse: bucket count < 1");
  VoptTable t = build_vopt_table(std::move(values), bucket_count);
  check(bucket_count <= t.n, "v_optimal_sse: more buckets than distinct values");
  return t.E(bucket_count, t.n);
}

// ---------------------------------------------------------------------------
// Bucket-count selection (f-fold cross validation)

namespace {

// Held-out squared error: over the distinct held-out costs, compare the
// fold's raw fractions with the histogram mass spread over the distinct
// held-out costs falling in the same bucket.
double holdout_se(const Histogram1D& h, const RawDistribution& test) {
  const auto& bks = h.buckets();
  std::vector<int> bucket_of(test.size(), -1);
  std::vector<double> distinct_in_bucket(bks.size(), 0.0);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double c = test[i].first;
    auto it = std::upper_bound(bks.begin(), bks.end(), c,
                               [](double x, const Bucket& b) { return x < b.lo; });
    if (it != bks.begin()) {
      const std::size_t k = static_cast<std::size_t>(it - bks.begin()) - 1;
      if (bks[k].contains(c)) {
        bucket_of[i] = static_cast<int>(k);
        distinct_in_bucket[k] += 1.0;
      }
    }
  }
  double se = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double hc = bucket_of[i] < 0
                          ? 0.0
                          : h.probabilities()[bucket_of[i]] /
                                distinct_in_bucket[bucket_of[i]];
    const double diff = hc - test[i].second;
    se += diff * diff;
  }
  return se;
}

}  // namespace

int auto_bucket_count(const std::vector<double>& values, int folds, double sig,
                      std::vector<double>* error_curve) {
  check(folds >= 2, "auto_bucket_count: need at least 2 folds");
  check(values.size() >= static_cast<std::size_t>(folds),
        "auto_bucket_count: fewer samples than folds");

  // Deterministic fold assignment.
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::shuffle(order.begin(), order.end(), rng);

  struct Fold {
    VoptTable table;
    RawDistribution test;
  };
  std::vector<Fold> fold_data;
  fold_data.reserve(folds);
  const std::size_t n = values.size();
  std::size_t pos = 0;
  for (int k = 0; k < folds; ++k) {
    const std::size_t size = n / folds + (static_cast<std::size_t>(k) < n % folds ? 1 : 0);
    std::vector<double> train, test;
    for (std::size_t i = 0; i < n; ++i) {
      const bool in_fold = i >= pos && i < pos + size;
      (in_fold ? test : train).push_back(values[order[i]]);
    }
    pos += size;
    Fold f{build_vopt_table(std::move(train), kMaxBucketCount),
           raw_distribution(std::move(test))};
    fold_data.push_back(std::move(f));
  }

  double prev = std::numeric_limits<double>::infinity();
  for (int b = 1; b <= kMaxBucketCount; ++b) {
    double eb = 0.0;
    for (const Fold& f : fold_data) {
      const int bb = std::min(b, f.table.n);
      eb += holdout_se(histogram_from_table(f.table, bb, 1.0), f.test);
    }
    eb /= folds;
    if (error_curve) error_curve->push_back(eb);
    if (b >= 2) {
      const bool significant = prev > 0.0 && (prev - eb) / prev >= sig;
      if (!significant) return b - 1;
    }
    prev = eb;
  }
  return kMaxBucketCount;
}

Histogram1D build_1d(const std::vector<double>& values, int folds, double sig,
                     double resolution) {
  check(!values.empty(), "build_1d: empty values");
  int b = 1;
  if (values.size() >= static_cast<std::size_t>(folds)) {
    b = auto_bucket_count(values, folds, sig);
  }
  VoptTable t = build_vopt_table(values, b);
  return histogram_from_table(t, std::min(b, t.n), resolution);
}

HistogramND build_nd(const std::vector<std::vector<double>>& vectors,
                     std::vector<std::string> dims, int folds, double sig,
                     double resolution) {
  check(!vectors.empty(), "build_nd: no vectors");
  const std::size_t n = dims.size();
  check(n >= 1 && vectors[0].size() == n, "build_nd: dimension mismatch");
  for (const auto& v : vectors) {
    check(v.size() == n, "build_nd: inconsistent dimensionality");
  }
  std::vector<std::vector<double>> boundaries(n);
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<double> comp;
    comp.reserve(vectors.size());
    for (const auto& v : vectors) comp.push_back(v[d]);
    boundaries[d] = build_1d(comp, folds, sig, resolution).boundaries();
  }
  std::map<std::vector<std::uint32_t>, double> mass;
  const double w = 1.0 / static_cast<double>(vectors.size());
  std::vector<std::uint32_t> idx(n);
  for (const auto& v : vectors) {
    for (std::size_t d = 0; d < n; ++d) {
      const auto& bd = boundaries[d];
      const auto it = std::upper_bound(bd.begin(), bd.end(), v[d]);
      idx[d] = static_cast<std::uint32_t>(it - bd.begin()) - 1;
    }
    mass[idx] += w;
  }
  std::vector<NdCell> cells;
  cells.reserve(mass.size());
  for (auto& [key, pr] : mass) cells.push_back({key, pr});
  return HistogramND(std::move(dims), std::move(boundaries), std::move(cells));
}

// ---------------------------------------------------------------------------
// Information measures

double entropy(const Histogram1D& h) {
  return kernels::entropy_sum(h.probabilities().data(), h.size());
}

double entropy(const HistogramND& h) {
  std::vector<double> prs;
  prs.reserve(h.cells().size());
  for (const auto& c : h.cells()) prs.push_back(c.pr);
  return kernels::entropy_sum(prs.data(), prs.size());
}

double kl_divergence(const Histogram1D& p, const Histogram1D& q) {
  std::vector<double> bounds;
  for (const auto& b : p.buckets()) {
    bounds.push_back(b.lo);
    bounds.push_back(b.hi);
  }
  for (const auto& b : q.buckets()) {
    bounds.push_back(b.lo);
    bounds.push_back(b.hi);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  const std::size_t nseg = bounds.size() - 1;
  std::vector<double> pm(nseg, 0.0), qm(nseg, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    kernels::overlap_add(pm.data(), bounds.data(), nseg, p.buckets()[i].lo,
                         p.buckets()[i].hi, p.probabilities()[i]);
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    kernels::overlap_add(qm.data(), bounds.data(), nseg, q.buckets()[i].lo,
                         q.buckets()[i].hi, q.probabilities()[i]);
  }
  double z = 0.0;
  for (std::size_t k = 0; k < nseg; ++k) {
    if (pm[k] > 0.0 || qm[k] > 0.0) z += qm[k] + kEps;
  }
  double kl = 0.0;
  for (std::size_t k = 0; k < nseg; ++k) {
    if (pm[k] > 0.0) kl += pm[k] * std::log(pm[k] * z / (qm[k] + kEps));
  }
  return std::max(kl, 0.0);
}

double kl_divergence(const HistogramND& p, const HistogramND& q) {
  check(p.dims() == q.dims(), "kl_divergence: dimension mismatch");
  std::vector<std::vector<double>> grids(p.dim_count());
  for (std::size_t d = 0; d < p.dim_count(); ++d) {
    grids[d] = p.boundaries(d);
    grids[d].insert(grids[d].end(), q.boundaries(d).begin(), q.boundaries(d).end());
    std::sort(grids[d].begin(), grids[d].end());
    grids[d].erase(std::unique(grids[d].begin(), grids[d].end()), grids[d].end());
  }
  const HistogramND pr = refine_nd(p, grids);
  const HistogramND qr = refine_nd(q, grids);
  std::map<std::vector<std::uint32_t>, std::pair<double, double>> cells;
  for (const auto& c : pr.cells()) cells[c.idx].first = c.pr;
  for (const auto& c : qr.cells()) cells[c.idx].second = c.pr;
  double z = 0.0;
  for (const auto& [idx, pq] : cells) z += pq.second + kEps;
  double kl = 0.0;
  for (const auto& [idx, pq] : cells) {
    if (pq.first > 0.0) kl += pq.first * std::log(pq.first * z / (pq.second + kEps));
  }
  return std::max(kl, 0.0);
}

// ---------------------------------------------------------------------------
// Distribution arithmetic

namespace {

// CDF at x of the sum of independent U[a,b) and U[c,d).
double uniform_sum_cdf(double x, double a, double b, double c, double d) {
  const double w1 = b - a, w2 = d - c;
  const double u = x - (a + c);
  const double lo = std::min(w1, w2), hi = std::max(w1, w2);
  if (u <= 0.0) return 0.0;
  if (u >= lo + hi) return 1.0;
  if (u <= lo) return u * u / (2.0 * w1 * w2);
  if (u <= hi) return lo * (u - lo / 2.0) / (w1 * w2);
  const double r = lo + hi - u;
  return 1.0 - r * r / (2.0 * w1 * w2);
}

}  // namespace

Histogram1D convolve(const Histogram1D& a, const Histogram1D& b) {
  std::vector<double> grid;
  grid.reserve(a.size() * b.size() * 4);
  for (const auto& x : a.buckets()) {
    for (const auto& y : b.buckets()) {
      grid.push_back(x.lo + y.lo);
      grid.push_back(x.lo + y.hi);
      grid.push_back(x.hi + y.lo);
      grid.push_back(x.hi + y.hi);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> cdf(grid.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double m = a.probabilities()[i] * b.probabilities()[j];
      const Bucket& x = a.buckets()[i];
      const Bucket& y = b.buckets()[j];
      for (std::size_t t = 1; t + 1 < grid.size(); ++t) {
        cdf[t] += m * uniform_sum_cdf(grid[t], x.lo, x.hi, y.lo, y.hi);
      }
      cdf[grid.size() - 1] += m;
    }
  }
  std::vector<Bucket> buckets;
  std::vector<double> prs;
  for (std::size_t t = 0; t + 1 < grid.size(); ++t) {
    const double m = std::max(0.0, cdf[t + 1] - cdf[t]);
    if (m > 0.0) {
      buckets.push_back({grid[t], grid[t + 1]});
      prs.push_back(m);
    }
  }
  return Histogram1D(std::move(buckets), std::move(prs));
}

Bucket hb2bu(const HyperBucket& hb) {
  Bucket out{0.0, 0.0};
  for (const Bucket& b : hb) {
    out.lo += b.lo;
    out.hi += b.hi;
  }
  return out;
}

Histogram1D rearrange(const std::vector<WeightedBucket>& pairs) {
  check(!pairs.empty(), "rearrange: no pairs");
  double total = 0.0;
  std::vector<double> bounds;
  bounds.reserve(pairs.size() * 2);
  for (const auto& p : pairs) {
    check(p.pr >= 0.0, "rearrange: negative probability");
    check(p.bucket.lo < p.bucket.hi, "rearrange: bad bucket");
    total += p.pr;
    bounds.push_back(p.bucket.lo);
    bounds.push_back(p.bucket.hi);
  }
  check(std::abs(total - 1.0) <= kMassTolerance,
        "rearrange: probabilities do not sum to 1");
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  const std::size_t nseg = bounds.size() - 1;
  std::vector<double> acc(nseg, 0.0);
  for (const auto& p : pairs) {
    kernels::overlap_add(acc.data(), bounds.data(), nseg, p.bucket.lo,
                         p.bucket.hi, p.pr);
  }
  std::vector<Bucket> buckets;
  std::vector<double> prs;
  for (std::size_t k = 0; k < nseg; ++k) {
    if (acc[k] > 0.0) {
      buckets.push_back({bounds[k], bounds[k + 1]});
      prs.push_back(acc[k]);
    }
  }
  return Histogram1D(std::move(buckets), std::move(prs));
}

Histogram1D marginal_sum(const HistogramND& h) {
  std::vector<WeightedBucket> pairs;
  pairs.reserve(h.cells().size());
  for (const auto& c : h.cells()) {
    pairs.push_back({hb2bu(h.hyper_bucket(c)), c.pr});
  }
  return rearrange(pairs);
}

HistogramND marginalize_onto(const HistogramND& h,
                             const std::vector<std::string>& dims) {
  check(!dims.empty(), "marginalize_onto: empty dimension set");
  std::vector<std::size_t> keep;
  for (std::size_t d = 0; d < h.dim_count(); ++d) {
    if (std::find(dims.begin(), dims.end(), h.dims()[d]) != dims.end()) {
      keep.push_back(d);
    }
  }
  check(keep.size() == dims.size(), "marginalize_onto: unknown dimension");
  std::vector<std::string> out_dims;
  std::vector<std::vector<double>> out_bounds;
  for (std::size_t d : keep) {
    out_dims.push_back(h.dims()[d]);
    out_bounds.push_back(h.boundaries(d));
  }
  std::map<std::vector<std::uint32_t>, double> mass;
  std::vector<std::uint32_t> key(keep.size());
  for (const auto& c : h.cells()) {
    for (std::size_t i = 0; i < keep.size(); ++i) key[i] = c.idx[keep[i]];
    mass[key] += c.pr;
  }
  std::vector<NdCell> cells;
  cells.reserve(mass.size());
  for (auto& [k, pr] : mass) cells.push_back({k, pr});
  return HistogramND(std::move(out_dims), std::move(out_bounds), std::move(cells));
}

Histogram1D refine(const Histogram1D& h,
                   const std::vector<double>& extra_boundaries) {
  std::vector<double> bounds;
  for (const auto& b : h.buckets()) {
    bounds.push_back(b.lo);
    bounds.push_back(b.hi);
  }
  for (double x : extra_boundaries) {
    if (x > h.min_cost() && x < h.max_cost()) bounds.push_back(x);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  const std::size_t nseg = bounds.size() - 1;
  std::vector<double> acc(nseg, 0.0);
  for (std::size_t i = 0; i < h.size(); ++i) {
    kernels::overlap_add(acc.data(), bounds.data(), nseg, h.buckets()[i].lo,
                         h.buckets()[i].hi, h.probabilities()[i]);
  }
  std::vector<Bucket> buckets;
  std::vector<double> prs;
  for (std::size_t k = 0; k < nseg; ++k) {
    if (acc[k] > 0.0) {
      buckets.push_back({bounds[k], bounds[k + 1]});
      prs.push_back(acc[k]);
    }
  }
  return Histogram1D(std::move(buckets), std::move(prs));
}

HistogramND refine_nd(const HistogramND& h,
                      const std::vector<std::vector<double>>& grids) {
  check(grids.size() == h.dim_count(), "refine_nd: grid arity mismatch");
  // Per dimension, map each original bucket to its grid segments + fractions.
  struct Split {
    std::vector<std::uint32_t> seg;
    std::vector<double> frac;
  };
  std::vector<std::vector<Split>> splits(h.dim_count());
  for (std::size_t d = 0; d < h.dim_count(); ++d) {
    const auto& grid = grids[d];
    for (double b : h.boundaries(d)) {
      check(std::binary_search(grid.begin(), grid.end(), b),
            "refine_nd: grid missing original boundary");
    }
    splits[d].resize(h.bucket_count(d));
    for (std::size_t i = 0; i < h.bucket_count(d); ++i) {
      const Bucket bu = h.bucket(d, static_cast<std::uint32_t>(i));
      const auto lo = std::lower_bound(grid.begin(), grid.end(), bu.lo);
      const auto hi = std::lower_bound(grid.begin(), grid.end(), bu.hi);
      for (auto it = lo; it != hi; ++it) {
        splits[d][i].seg.push_back(static_cast<std::uint32_t>(it - grid.begin()));
        splits[d][i].frac.push_back((*(it + 1) - *it) / bu.width());
      }
    }
  }
  std::map<std::vector<std::uint32_t>, double> mass;
  std::vector<std::uint32_t> key(h.dim_count());
  for (const auto& c : h.cells()) {
    // Expand the per-dimension splits as a product.
    std::vector<std::size_t> at(h.dim_count(), 0);
    while (true) {
      double f = c.pr;
      for (std::size_t d = 0; d < h.dim_count(); ++d) {
        const Split& s = splits[d][c.idx[d]];
        key[d] = s.seg[at[d]];
        f *= s.frac[at[d]];
      }
      mass[key] += f;
      std::size_t d = 0;
      for (; d < h.dim_count(); ++d) {
        if (++at[d] < splits[d][c.idx[d]].seg.size()) break;
        at[d] = 0;
      }
      if (d == h.dim_count()) break;
    }
  }
  std::vector<NdCell> cells;
  cells.reserve(mass.size());
  for (auto& [k, pr] : mass) cells.push_back({k, pr});
  return HistogramND(h.dims(), grids, std::move(cells));
}

}  // namespace pathcost
