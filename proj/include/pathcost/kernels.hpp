#pragma once

#include <cstddef>

// Arithmetic inner loops used by the histogram machinery. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. The AVX2 variants perform the same IEEE operations per element as
// the scalar code (no FMA, no reassociation inside an element), so
// overlap_add and vopt_best_split are bit-identical across variants; sum()
// uses lane-partial accumulation and may differ in the last ulps.
//
// entropy_sum and kl_sum are deliberately scalar-only: they feed entropy
// identities checked to 1e-9 and therefore must use std::log exactly.

namespace pathcost::kernels {

struct SplitResult {
  double value;
  long index;  // -1 when the candidate range is empty
};

/// Sum of x[0..n).
double sum(const double* x, std::size_t n);

/// acc[k] += pr * |[bounds[k], bounds[k+1]) ∩ [lo, hi)| / (hi - lo)
/// for k in [0, nseg). bounds has nseg+1 ascending entries; hi > lo.
void overlap_add(double* acc, const double* bounds, std::size_t nseg,
                 double lo, double hi, double pr);

/// argmin over j in [lo, hi) of
///   dp[j] + (Q[end]-Q[j]) - (S[end]-S[j])^2 / (W[end]-W[j])
/// where W/S/Q are prefix sums of weights, weighted values and weighted
/// squared values over the sorted distinct values. Ties keep the smallest j.
SplitResult vopt_best_split(const double* dp, const double* W, const double* S,
                            const double* Q, std::size_t end, std::size_t lo,
                            std::size_t hi);

/// -sum p_i ln p_i with 0 ln 0 = 0.
double entropy_sum(const double* p, std::size_t n);

/// sum over p_i > 0 of p_i (ln p_i - ln q_i).
double kl_sum(const double* p, const double* q, std::size_t n);

/// True when dispatch resolved to the AVX2 variants.
bool avx2_active();

namespace scalar {
double sum(const double* x, std::size_t n);
void overlap_add(double* acc, const double* bounds, std::size_t nseg,
                 double lo, double hi, double pr);
SplitResult vopt_best_split(const double* dp, const double* W, const double* S,
                            const double* Q, std::size_t end, std::size_t lo,
                            std::size_t hi);
}  // namespace scalar

#if defined(PATHCOST_HAVE_AVX2)
namespace avx2 {
double sum(const double* x, std::size_t n);
void overlap_add(double* acc, const double* bounds, std::size_t nseg,
                 double lo, double hi, double pr);
SplitResult vopt_best_split(const double* dp, const double* W, const double* S,
                            const double* Q, std::size_t end, std::size_t lo,
                            std::size_t hi);
}  // namespace avx2
#endif

}  // namespace pathcost::kernels
