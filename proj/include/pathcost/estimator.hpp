#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pathcost/learner.hpp"

namespace pathcost {

/// Closed [lo, hi] minute window used by shift-and-enlarge propagation.
struct ClosedInterval {
  double lo = 0.0;
  double hi = 0.0;
};

bool intersects(const ClosedInterval& w, const TimeInterval& i);
double overlap_minutes(const ClosedInterval& w, const TimeInterval& i);

/// Shifts the window start by the variable's minimum represented cost and the
/// end by its maximum (seconds -> minutes), clamped into the day (no wrap).
ClosedInterval sae(const ClosedInterval& window, const LearnedVariable& v);

class EstimationError : public std::runtime_error {
 public:
  enum class Kind { kUncoverableEdge, kInconsistentComposition, kSparseData };

  EstimationError(Kind kind, std::string message, EdgeId edge = {},
                  std::int64_t count = 0)
      : std::runtime_error(std::move(message)),
        kind_(kind),
        edge_(std::move(edge)),
        count_(count) {}

  Kind kind() const { return kind_; }
  const EdgeId& edge() const { return edge_; }
  std::int64_t count() const { return count_; }

 private:
  Kind kind_;
  EdgeId edge_;
  std::int64_t count_;
};

/// Per-position SAE windows along a path plus the rank-1 variable (learned or
/// fallback) used to advance each step.
struct UnitChain {
  std::vector<ClosedInterval> windows;
  std::vector<const LearnedVariable*> units;
};

UnitChain chain_unit_windows(const VariableStore& store, const Path& p,
                             double depart_minute);

/// Spatio-temporally relevant learned variables per start position (fallback
/// variables excluded). rows[i] may hold several intervals of one path.
struct RelevantVariables {
  std::vector<std::vector<const LearnedVariable*>> rows;
  UnitChain chain;
};

RelevantVariables relevant_variables(const Path& p, double depart_minute,
                                     const VariableStore& store);

/// rows[i][*]: one variable per rank (best interval overlap), ranks ascending.
using CandidateArray = std::vector<std::vector<const LearnedVariable*>>;

CandidateArray build_candidate_array(const Path& p, const RelevantVariables& rel);

struct CrvEntry {
  const LearnedVariable* var = nullptr;
  std::size_t start = 0;  // position of the variable's path in the query path

  std::size_t end() const { return start + var->rank(); }  // one past
};

/// Ordered candidate random variable set covering the query path.
using Crv = std::vector<CrvEntry>;

/// One row's candidate set: seeded with the row's highest-rank variable, then
/// extended left and right with the longest admissible variables.
std::optional<Crv> greedy_row_crv(const CandidateArray& array, std::size_t row,
                                  std::size_t path_cardinality);

/// Greedy per-row construction followed by coarser pruning; returns the
/// minimum-entropy member. Throws EstimationError for uncoverable edges.
Crv identify_crv_opt(const CandidateArray& array, const Path& p);

/// Sum of member entropies minus entropies of consecutive-overlap marginals.
double crv_entropy(const Crv& crv);

/// Every path of b is a sub-path of some path of a.
bool is_coarser(const Crv& a, const Crv& b);

bool satisfies_spatial_conditions(const Crv& crv, std::size_t path_cardinality);
bool satisfies_temporal_condition(const Crv& crv, const Path& p,
                                  double depart_minute, const VariableStore& store);

/// Explicit composed joint (oracle route; meant for small dimensionality).
HistogramND estimate_joint(const Crv& crv);

/// Marginal of the composed joint via the eliminated (accumulated-sum bucket x
/// shared-edge dimensions) representation; exact state aggregation with one
/// final rearrange, so it matches marginal_sum(estimate_joint(crv)) except
/// when a state exceeds compact_threshold and is compacted lossily.
Histogram1D estimate_marginal(const Crv& crv, std::size_t compact_threshold = 8192);

/// All variable sequences satisfying the spatial conditions over the array,
/// capped at `limit` (overflow reported via the flag).
std::vector<Crv> enumerate_valid_crvs(const CandidateArray& array,
                                      std::size_t path_cardinality,
                                      std::size_t limit, bool* overflow = nullptr);

struct EstimationResult {
  Histogram1D marginal;
  double entropy_of_joint = 0.0;
  Crv crv;
  std::string method;
};

/// Full pipeline: relevance -> candidate array -> optimal CRV -> composition
/// -> cost-sum marginal.
EstimationResult estimate(const VariableStore& store, const Path& p,
                          double depart_minute);

}  // namespace pathcost
