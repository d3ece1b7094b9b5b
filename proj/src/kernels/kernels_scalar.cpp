#include "pathcost/kernels.hpp"

#include <algorithm>
#include <limits>

namespace pathcost::kernels::scalar {

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void overlap_add(double* acc, const double* bounds, std::size_t nseg,
                 double lo, double hi, double pr) {
  const double inv_w = pr / (hi - lo);
  for (std::size_t k = 0; k < nseg; ++k) {
    const double a = std::max(lo, bounds[k]);
    const double b = std::min(hi, bounds[k + 1]);
    const double ov = std::max(0.0, b - a);
    acc[k] += ov * inv_w;
  }
}

SplitResult vopt_best_split(const double* dp, const double* W, const double* S,
                            const double* Q, std::size_t end, std::size_t lo,
                            std::size_t hi) {
  SplitResult best{std::numeric_limits<double>::infinity(), -1};
  const double we = W[end], se = S[end], qe = Q[end];
  for (std::size_t j = lo; j < hi; ++j) {
    const double dw = we - W[j];
    const double ds = se - S[j];
    const double cand = dp[j] + (qe - Q[j]) - (ds * ds) / dw;
    if (cand < best.value) {
      best.value = cand;
      best.index = static_cast<long>(j);
    }
  }
  return best;
}

}  // namespace pathcost::kernels::scalar
