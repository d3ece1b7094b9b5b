#include "pathcost/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace pathcost::kernels {

namespace {

bool detect_avx2() {
#if defined(PATHCOST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  if (const char* env = std::getenv("PATHCOST_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return false;
  }
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const bool g_use_avx2 = detect_avx2();

}  // namespace

bool avx2_active() { return g_use_avx2; }

double sum(const double* x, std::size_t n) {
#if defined(PATHCOST_HAVE_AVX2)
  if (g_use_avx2) return avx2::sum(x, n);
#endif
  return scalar::sum(x, n);
}

void overlap_add(double* acc, const double* bounds, std::size_t nseg,
                 double lo, double hi, double pr) {
#if defined(PATHCOST_HAVE_AVX2)
  if (g_use_avx2) {
    avx2::overlap_add(acc, bounds, nseg, lo, hi, pr);
    return;
  }
#endif
  scalar::overlap_add(acc, bounds, nseg, lo, hi, pr);
}

SplitResult vopt_best_split(const double* dp, const double* W, const double* S,
                            const double* Q, std::size_t end, std::size_t lo,
                            std::size_t hi) {
#if defined(PATHCOST_HAVE_AVX2)
  if (g_use_avx2) return avx2::vopt_best_split(dp, W, S, Q, end, lo, hi);
#endif
  return scalar::vopt_best_split(dp, W, S, Q, end, lo, hi);
}

double entropy_sum(const double* p, std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  }
  return h;
}

double kl_sum(const double* p, const double* q, std::size_t n) {
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) d += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return d;
}

}  // namespace pathcost::kernels
