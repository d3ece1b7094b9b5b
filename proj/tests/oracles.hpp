// Independent reference implementations used by tests and the acceptance
// suite. These deliberately avoid the library's algorithmic code paths:
// exhaustive enumeration instead of DP/greedy, fine grids and Monte Carlo
// instead of closed forms.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "pathcost/estimator.hpp"
#include "pathcost/histogram.hpp"
#include "pathcost/learner.hpp"

namespace oracles {

// Minimum within-bucket count-weighted squared deviation over all placements
// of `buckets - 1` boundaries between the sorted distinct values.
double brute_force_vopt_sse(const std::vector<double>& values, int buckets);

// Best exhaustive split points (group start indices into the distinct list).
std::vector<int> brute_force_vopt_groups(const std::vector<double>& values,
                                         int buckets);

// Monte Carlo estimate of P(X + Y in [lo, hi)) for bucket-uniform X, Y.
double mc_sum_mass(const pathcost::Histogram1D& a, const pathcost::Histogram1D& b,
                   double lo, double hi, std::size_t samples, std::uint64_t seed);

// Fine-grid accumulation of the cost-sum distribution of a joint histogram:
// every hyper-bucket's summed-bound range spread uniformly over grid cells.
// Returns mass per [origin + k*res, origin + (k+1)*res).
std::map<long, double> fine_grid_marginal(const pathcost::HistogramND& h,
                                          double resolution, double* origin);

// Mass of h on [lo, hi) under uniform in-bucket density.
double mass_on(const pathcost::Histogram1D& h, double lo, double hi);

// ---------------------------------------------------------------------------
// Discrete instruments for the consistency theorems: a dense joint over a
// few integer-valued cost levels per edge.
struct DiscreteJoint {
  std::vector<std::string> edges;
  std::vector<std::vector<double>> values;  // per edge, ascending
  std::vector<double> probs;                // dense, row-major over values

  std::size_t index(const std::vector<std::size_t>& idx) const;
  double entropy() const;

  // Exact marginal over a contiguous edge span [pos, pos + len).
  DiscreteJoint marginal(std::size_t pos, std::size_t len) const;

  // Histogram with one bucket per value level on every dimension.
  pathcost::HistogramND to_histogram() const;
};

DiscreteJoint random_joint(std::size_t edge_count, std::size_t max_values,
                           std::mt19937_64& rng);

// A consistent variable store over the joint's path: every contiguous
// sub-path in `spans` becomes a learned variable with the exact marginal.
pathcost::VariableStore consistent_store(
    const DiscreteJoint& joint,
    const std::vector<std::pair<std::size_t, std::size_t>>& spans);

// All valid CRV sequences over the candidate array (order-aware DFS with
// set-level checks), independent of the library's enumerator.
std::vector<pathcost::Crv> enumerate_crvs_oracle(
    const pathcost::CandidateArray& array, std::size_t path_cardinality,
    std::size_t step_limit = 2000000);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracles
