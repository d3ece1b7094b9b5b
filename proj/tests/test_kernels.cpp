#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "pathcost/kernels.hpp"

using namespace pathcost;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo = 0.0,
                               double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("kernel sum matches scalar within accumulation tolerance") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                        std::size_t{4}, std::size_t{5}, std::size_t{17},
                        std::size_t{1024}}) {
    const auto v = random_vec(n, rng);
    const double s = kernels::scalar::sum(v.data(), n);
    const double d = kernels::sum(v.data(), n);
    CHECK(d == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("overlap_add variants are bit-identical") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    std::uniform_int_distribution<std::size_t> nsegd(1, 40);
    const std::size_t nseg = nsegd(rng);
    std::vector<double> bounds(nseg + 1);
    double b = 0.0;
    for (auto& x : bounds) {
      x = b;
      b += std::uniform_real_distribution<double>(0.1, 4.0)(rng);
    }
    std::uniform_real_distribution<double> u(-1.0, bounds.back() + 1.0);
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    if (lo == hi) hi = lo + 0.5;
    const double pr = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

    std::vector<double> acc_scalar(nseg, 0.0), acc_dispatch(nseg, 0.0);
    kernels::scalar::overlap_add(acc_scalar.data(), bounds.data(), nseg, lo, hi, pr);
    kernels::overlap_add(acc_dispatch.data(), bounds.data(), nseg, lo, hi, pr);
    for (std::size_t k = 0; k < nseg; ++k) {
      CHECK(acc_scalar[k] == acc_dispatch[k]);  // exact
    }
#if defined(PATHCOST_HAVE_AVX2)
    if (kernels::avx2_active()) {
      std::vector<double> acc_avx(nseg, 0.0);
      kernels::avx2::overlap_add(acc_avx.data(), bounds.data(), nseg, lo, hi, pr);
      for (std::size_t k = 0; k < nseg; ++k) CHECK(acc_avx[k] == acc_scalar[k]);
    }
#endif
  }
}

TEST_CASE("vopt_best_split variants agree exactly including tie-breaks") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 300; ++iter) {
    std::uniform_int_distribution<std::size_t> nd(2, 60);
    const std::size_t n = nd(rng);
    std::vector<double> W(n + 1, 0.0), S(n + 1, 0.0), Q(n + 1, 0.0);
    std::vector<double> dp(n + 1, 0.0);
    // duplicate-heavy inputs to provoke ties
    std::uniform_int_distribution<int> vals(1, 4);
    std::uniform_int_distribution<int> cnts(1, 3);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = vals(rng);
      const double c = cnts(rng);
      W[i + 1] = W[i] + c;
      S[i + 1] = S[i] + c * v;
      Q[i + 1] = Q[i] + c * v * v;
      dp[i] = (i % 3 == 0) ? 0.0 : std::uniform_real_distribution<double>(0, 2)(rng);
    }
    std::uniform_int_distribution<std::size_t> lod(0, n - 1);
    const std::size_t lo = lod(rng);
    const std::size_t hi =
        std::uniform_int_distribution<std::size_t>(lo + 1, n)(rng);
    const auto s = kernels::scalar::vopt_best_split(dp.data(), W.data(), S.data(),
                                                    Q.data(), n, lo, hi);
    const auto d =
        kernels::vopt_best_split(dp.data(), W.data(), S.data(), Q.data(), n, lo, hi);
    CHECK(s.value == d.value);
    CHECK(s.index == d.index);
#if defined(PATHCOST_HAVE_AVX2)
    if (kernels::avx2_active()) {
      const auto a = kernels::avx2::vopt_best_split(dp.data(), W.data(), S.data(),
                                                    Q.data(), n, lo, hi);
      CHECK(a.value == s.value);
      CHECK(a.index == s.index);
    }
#endif
  }
}

TEST_CASE("entropy_sum and kl_sum basics") {
  const std::vector<double> p{0.5, 0.5, 0.0};
  CHECK(kernels::entropy_sum(p.data(), p.size()) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const std::vector<double> q{0.25, 0.75, 1.0};
  CHECK(kernels::kl_sum(p.data(), p.data(), p.size()) == doctest::Approx(0.0));
  CHECK(kernels::kl_sum(p.data(), q.data(), p.size()) > 0.0);
}
