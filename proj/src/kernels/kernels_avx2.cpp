// AVX2 variants. Compiled with -mavx2 and -ffp-contract=off so every lane
// performs the same mul/sub/div/add sequence as the scalar reference;
// overlap_add and vopt_best_split are bit-identical to scalar.

#include "pathcost/kernels.hpp"

#if defined(PATHCOST_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace pathcost::kernels::avx2 {

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += x[i];
  return total;
}

void overlap_add(double* acc, const double* bounds, std::size_t nseg,
                 double lo, double hi, double pr) {
  const double inv_w = pr / (hi - lo);
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vinv = _mm256_set1_pd(inv_w);
  std::size_t k = 0;
  for (; k + 4 <= nseg; k += 4) {
    const __m256d b0 = _mm256_loadu_pd(bounds + k);
    const __m256d b1 = _mm256_loadu_pd(bounds + k + 1);
    const __m256d a = _mm256_max_pd(vlo, b0);
    const __m256d b = _mm256_min_pd(vhi, b1);
    const __m256d ov = _mm256_max_pd(vzero, _mm256_sub_pd(b, a));
    const __m256d add = _mm256_mul_pd(ov, vinv);
    _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), add));
  }
  for (; k < nseg; ++k) {
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
  std::size_t j = lo;

  if (j + 4 <= hi) {
    const __m256d vwe = _mm256_set1_pd(we);
    const __m256d vse = _mm256_set1_pd(se);
    const __m256d vqe = _mm256_set1_pd(qe);
    __m256d vbest = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256i vbidx = _mm256_set1_epi64x(-1);
    for (; j + 4 <= hi; j += 4) {
      const __m256d dw = _mm256_sub_pd(vwe, _mm256_loadu_pd(W + j));
      const __m256d ds = _mm256_sub_pd(vse, _mm256_loadu_pd(S + j));
      const __m256d dq = _mm256_sub_pd(vqe, _mm256_loadu_pd(Q + j));
      const __m256d sse = _mm256_sub_pd(dq, _mm256_div_pd(_mm256_mul_pd(ds, ds), dw));
      const __m256d cand = _mm256_add_pd(_mm256_loadu_pd(dp + j), sse);
      const __m256d lt = _mm256_cmp_pd(cand, vbest, _CMP_LT_OQ);
      vbest = _mm256_blendv_pd(vbest, cand, lt);
      const __m256i idx = _mm256_set_epi64x(static_cast<long long>(j + 3),
                                            static_cast<long long>(j + 2),
                                            static_cast<long long>(j + 1),
                                            static_cast<long long>(j));
      vbidx = _mm256_castpd_si256(_mm256_blendv_pd(
          _mm256_castsi256_pd(vbidx), _mm256_castsi256_pd(idx), lt));
    }
    alignas(32) double lane_val[4];
    alignas(32) long long lane_idx[4];
    _mm256_store_pd(lane_val, vbest);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lane_idx), vbidx);
    for (int l = 0; l < 4; ++l) {
      // Smallest index wins among equal minima, matching the scalar scan.
      if (lane_val[l] < best.value ||
          (lane_val[l] == best.value && lane_idx[l] >= 0 &&
           (best.index < 0 || lane_idx[l] < best.index))) {
        best.value = lane_val[l];
        best.index = static_cast<long>(lane_idx[l]);
      }
    }
  }

  for (; j < hi; ++j) {
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

}  // namespace pathcost::kernels::avx2

#endif  // PATHCOST_HAVE_AVX2
