#include "pathcost/baselines.hpp"

#include <algorithm>
#include <random>

namespace pathcost {

Histogram1D aob(const TrajectoryStore& trajectories, const Path& p,
                double depart_minute, const StoreParams& params) {
  const auto intervals = partition_day(params.alpha);
  const TimeInterval* interval = nullptr;
  for (const auto& iv : intervals) {
    if (iv.contains(depart_minute)) {
      interval = &iv;
      break;
    }
  }
  if (!interval) {
    throw EstimationError(EstimationError::Kind::kSparseData,
                          "departure time outside the day");
  }
  const auto qualified = trajectories.qualified(p, *interval);
  if (static_cast<std::int64_t>(qualified.size()) <= params.beta) {
    throw EstimationError(
        EstimationError::Kind::kSparseData,
        "only " + std::to_string(qualified.size()) +
            " qualified trajectories (threshold " + std::to_string(params.beta) +
            ")",
        p.edges.front(), static_cast<std::int64_t>(qualified.size()));
  }
  std::vector<double> totals;
  totals.reserve(qualified.size());
  for (const auto& cv : qualified) totals.push_back(cv.total());
  return build_1d(totals, params.folds, params.sig, params.resolution);
}

Histogram1D lb(const VariableStore& store, const Path& p, double depart_minute) {
  const UnitChain chain = chain_unit_windows(store, p, depart_minute);
  Histogram1D out = chain.units[0]->hist.to_1d();
  for (std::size_t i = 1; i < chain.units.size(); ++i) {
    out = convolve(out, chain.units[i]->hist.to_1d());
  }
  return out;
}

EstimationResult hp(const VariableStore& store, const Path& p,
                    double depart_minute) {
  const std::size_t n = p.cardinality();
  const auto rel = relevant_variables(p, depart_minute, store);
  const auto array = build_candidate_array(p, rel);

  const auto rank2_at = [&](std::size_t s) -> const LearnedVariable* {
    for (const LearnedVariable* v : array[s]) {
      if (v->rank() == 2) return v;
    }
    return nullptr;
  };
  const auto unit_at = [&](std::size_t s) -> const LearnedVariable* {
    for (const LearnedVariable* v : array[s]) {
      if (v->rank() == 1) return v;
    }
    return rel.chain.units[s];  // learned-or-fallback unit
  };

  Crv crv;
  if (n == 1) {
    crv.push_back({unit_at(0), 0});
  } else {
    if (const LearnedVariable* v = rank2_at(0)) {
      crv.push_back({v, 0});
    } else {
      crv.push_back({unit_at(0), 0});
    }
    while (crv.back().end() < n) {
      const std::size_t covered = crv.back().end();  // one past
      // Prefer the pair overlapping the last covered edge.
      if (const LearnedVariable* v = rank2_at(covered - 1)) {
        crv.push_back({v, covered - 1});
      } else if (const LearnedVariable* v2 = rank2_at(covered);
                 v2 && covered + 1 < n) {
        crv.push_back({v2, covered});
      } else {
        crv.push_back({unit_at(covered), covered});
      }
    }
  }
  Histogram1D marginal = estimate_marginal(crv);
  return {std::move(marginal), crv_entropy(crv), std::move(crv), "hp"};
}

EstimationResult random_crv(const VariableStore& store, const Path& p,
                            double depart_minute, std::uint64_t seed) {
  const std::size_t n = p.cardinality();
  const auto rel = relevant_variables(p, depart_minute, store);
  const auto array = build_candidate_array(p, rel);
  std::mt19937_64 rng(seed);

  Crv chosen;
  bool have = false;
  if (n <= 12) {
    bool overflow = false;
    auto all = enumerate_valid_crvs(array, n, 100000, &overflow);
    if (!overflow && !all.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
      chosen = all[pick(rng)];
      have = true;
    }
  }
  if (!have) {
    // Randomized greedy: random base row/variable, random admissible
    // extensions leftward then rightward.
    for (int attempt = 0; attempt < 64 && !have; ++attempt) {
      std::uniform_int_distribution<std::size_t> row_pick(0, n - 1);
      const std::size_t row = row_pick(rng);
      if (array[row].empty()) continue;
      std::uniform_int_distribution<std::size_t> var_pick(0, array[row].size() - 1);
      Crv crv{{array[row][var_pick(rng)], row}};
      bool dead = false;
      while (crv.front().start > 0 && !dead) {
        const std::size_t left = crv.front().start;
        const std::size_t first_end = crv.front().end();
        std::vector<CrvEntry> options;
        for (std::size_t a = 0; a < left; ++a) {
          for (const LearnedVariable* v : array[a]) {
            const std::size_t e = a + v->rank();
            if (e >= left && e <= first_end) options.push_back({v, a});
          }
        }
        if (options.empty()) {
          dead = true;
          break;
        }
        std::uniform_int_distribution<std::size_t> opt(0, options.size() - 1);
        crv.insert(crv.begin(), options[opt(rng)]);
      }
      while (!dead && crv.back().end() < n) {
        const std::size_t right = crv.back().end();
        std::vector<CrvEntry> options;
        for (std::size_t s = crv.back().start; s <= right; ++s) {
          for (const LearnedVariable* v : array[s]) {
            if (s + v->rank() > right) options.push_back({v, s});
          }
        }
        if (options.empty()) {
          dead = true;
          break;
        }
        std::uniform_int_distribution<std::size_t> opt(0, options.size() - 1);
        crv.push_back(options[opt(rng)]);
      }
      if (!dead) {
        chosen = std::move(crv);
        have = true;
      }
    }
  }
  if (!have) chosen = identify_crv_opt(array, p);

  Histogram1D marginal = estimate_marginal(chosen);
  return {std::move(marginal), crv_entropy(chosen), std::move(chosen),
          "crv-random"};
}

}  // namespace pathcost
