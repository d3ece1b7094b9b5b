#pragma once

#include <cstdint>

#include "pathcost/estimator.hpp"

namespace pathcost {

/// Ground-truth distribution from the qualified trajectories of the full
/// path: auto histogram over total path costs. Throws a sparseness error
/// when at most `beta` trajectories qualify.
Histogram1D aob(const TrajectoryStore& trajectories, const Path& p,
                double depart_minute, const StoreParams& params);

/// Legacy convolution baseline: per-edge unit variables chained left to
/// right, each edge's variable chosen by the SAE window of the prefix.
Histogram1D lb(const VariableStore& store, const Path& p, double depart_minute);

/// Rank-2 chain estimator: pairwise variables where available, unit
/// variables (learned or fallback) for missing links.
EstimationResult hp(const VariableStore& store, const Path& p,
                    double depart_minute);

/// A uniformly sampled valid CRV (exhaustive enumeration at desk scale,
/// randomized greedy beyond it), composed and marginalized.
EstimationResult random_crv(const VariableStore& store, const Path& p,
                            double depart_minute, std::uint64_t seed);

}  // namespace pathcost
