#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pathcost {

inline constexpr double kMassTolerance = 1e-9;
inline constexpr int kMaxBucketCount = 16;

/// Half-open cost range [lo, hi).
struct Bucket {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x < hi; }
  friend bool operator==(const Bucket&, const Bucket&) = default;
};

/// One bucket per dimension of an N-d histogram.
using HyperBucket = std::vector<Bucket>;

struct WeightedBucket {
  Bucket bucket;
  double pr = 0.0;
};

/// Empirical (cost, fraction) pairs, fractions summing to 1.
using RawDistribution = std::vector<std::pair<double, double>>;

RawDistribution raw_distribution(std::vector<double> values);

/// Univariate distribution as disjoint ascending buckets with probabilities
/// summing to 1 (within kMassTolerance). Buckets need not be contiguous.
class Histogram1D {
 public:
  Histogram1D(std::vector<Bucket> buckets, std::vector<double> probabilities);

  const std::vector<Bucket>& buckets() const { return buckets_; }
  const std::vector<double>& probabilities() const { return prs_; }
  std::size_t size() const { return buckets_.size(); }

  double min_cost() const { return buckets_.front().lo; }
  double max_cost() const { return buckets_.back().hi; }

  /// Probability mass on [a, b) under uniform in-bucket density.
  double mass_below(double x) const;

  /// All bucket boundaries (lo of each bucket plus trailing hi values where
  /// buckets are non-contiguous), ascending.
  std::vector<double> boundaries() const;

  friend bool operator==(const Histogram1D&, const Histogram1D&) = default;

 private:
  std::vector<Bucket> buckets_;
  std::vector<double> prs_;
};

struct NdCell {
  std::vector<std::uint32_t> idx;
  double pr = 0.0;
  friend bool operator==(const NdCell&, const NdCell&) = default;
};

/// Joint distribution over labeled dimensions. Per-dimension boundary grids
/// plus a sparse cell list (zero-mass hyper-buckets omitted), cells sorted
/// lexicographically by index.
class HistogramND {
 public:
  HistogramND(std::vector<std::string> dims,
              std::vector<std::vector<double>> boundaries,
              std::vector<NdCell> cells);

  static HistogramND from_1d(const Histogram1D& h, std::string dim);
  Histogram1D to_1d() const;

  const std::vector<std::string>& dims() const { return dims_; }
  std::size_t dim_count() const { return dims_.size(); }
  const std::vector<double>& boundaries(std::size_t dim) const {
    return boundaries_[dim];
  }
  const std::vector<std::vector<double>>& boundaries() const {
    return boundaries_;
  }
  std::size_t bucket_count(std::size_t dim) const {
    return boundaries_[dim].size() - 1;
  }
  const std::vector<NdCell>& cells() const { return cells_; }

  Bucket bucket(std::size_t dim, std::uint32_t idx) const;
  HyperBucket hyper_bucket(const NdCell& cell) const;

  /// Smallest / largest total (summed over dimensions) cost represented.
  double min_total_cost() const;
  double max_total_cost() const;

  friend bool operator==(const HistogramND&, const HistogramND&) = default;

 private:
  std::vector<std::string> dims_;
  std::vector<std::vector<double>> boundaries_;
  std::vector<NdCell> cells_;
};

/// Optimal b-bucket histogram of a value multiset: partitions the sorted
/// distinct values into b contiguous groups minimizing the total within-group
/// count-weighted squared deviation from the group mean. Boundaries fall on
/// observed values; the last bucket is padded by `resolution`.
Histogram1D v_optimal(std::vector<double> values, int bucket_count,
                      double resolution = 1.0);

/// Total squared error of the optimal b-bucket partition (digest of the DP).
double v_optimal_sse(std::vector<double> values, int bucket_count);

/// f-fold cross-validated bucket-count selection: grows b until the mean
/// held-out squared error stops dropping by a `sig` fraction, then returns
/// b-1 (capped at kMaxBucketCount). Fold assignment is seeded and
/// deterministic. Optionally reports the per-b error curve.
int auto_bucket_count(const std::vector<double>& values, int folds, double sig,
                      std::vector<double>* error_curve = nullptr);

Histogram1D build_1d(const std::vector<double>& values, int folds, double sig,
                     double resolution = 1.0);

HistogramND build_nd(const std::vector<std::vector<double>>& vectors,
                     std::vector<std::string> dims, int folds, double sig,
                     double resolution = 1.0);

/// Discrete Shannon entropy over bucket masses, in nats.
double entropy(const Histogram1D& h);
double entropy(const HistogramND& h);

/// KL(p || q) after refining both onto the per-dimension boundary union
/// (uniform in-bucket mass splitting) and epsilon-smoothing q.
double kl_divergence(const Histogram1D& p, const Histogram1D& q);
double kl_divergence(const HistogramND& p, const HistogramND& q);

/// Distribution of X + Y for independent bucket-uniform X, Y, discretized
/// exactly onto the grid of pairwise boundary sums.
Histogram1D convolve(const Histogram1D& a, const Histogram1D& b);

/// Bucket of summed bounds: [sum lo_j, sum hi_j).
Bucket hb2bu(const HyperBucket& hb);

/// Disjoint histogram over the union of the input bounds; each output bucket
/// collects the uniform-density overlap of every input pair.
Histogram1D rearrange(const std::vector<WeightedBucket>& pairs);

/// Cost-sum marginal of a joint: hb2bu on every cell, then rearrange.
Histogram1D marginal_sum(const HistogramND& h);

/// Projection onto a subset of dimensions (summing the rest out). Retained
/// dimensions keep their order in h.
HistogramND marginalize_onto(const HistogramND& h,
                             const std::vector<std::string>& dims);

/// Equivalent histogram with extra boundaries inserted (uniform splitting).
Histogram1D refine(const Histogram1D& h,
                   const std::vector<double>& extra_boundaries);

/// Equivalent joint with per-dimension boundaries refined to the given grids
/// (which must contain the original boundaries of each dimension).
HistogramND refine_nd(const HistogramND& h,
                      const std::vector<std::vector<double>>& grids);

}  // namespace pathcost
