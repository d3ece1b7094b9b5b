#include "pathcost/eval.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace pathcost {

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-14) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-14) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

double digamma(double x) {
  double r = 0.0;
  while (x < 6.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  return r + std::log(x) - 0.5 / x -
         f * (1.0 / 12.0 - f * (1.0 / 120.0 - f / 252.0));
}

double trigamma(double x) {
  double r = 0.0;
  while (x < 6.0) {
    r += 1.0 / (x * x);
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  return r + 1.0 / x + f / 2.0 + f / x * (1.0 / 6.0 - f * (1.0 / 30.0 - f / 42.0));
}

struct GammaFit {
  double shape = 1.0;
  double rate = 1.0;
};

GammaFit fit_gamma_mle(const std::vector<double>& xs) {
  double mean = 0.0, mean_log = 0.0;
  for (double x : xs) {
    const double xv = std::max(x, 1e-9);
    mean += xv;
    mean_log += std::log(xv);
  }
  mean /= xs.size();
  mean_log /= xs.size();
  const double s = std::log(mean) - mean_log;
  double k = s > 1e-12 ? (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) /
                             (12.0 * s)
                       : 1e6;
  for (int i = 0; i < 50; ++i) {
    const double g = std::log(k) - digamma(k) - s;
    const double gp = 1.0 / k - trigamma(k);
    const double step = g / gp;
    k -= step;
    if (k <= 0.0) k = 1e-6;
    if (std::abs(step) < 1e-12 * k) break;
  }
  return {k, k / mean};
}

// KL of a CDF-defined fit against the raw distribution on a resolution grid,
// with the same eps-smoothing convention as kl_divergence.
double kl_raw_vs_cdf(const Histogram1D& raw,
                     const std::function<double(double)>& cdf) {
  const auto bounds = raw.boundaries();
  double z = 0.0;
  std::vector<double> qm;
  std::vector<double> pm;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Bucket& b = raw.buckets()[i];
    const double q = std::max(0.0, cdf(b.hi) - cdf(b.lo));
    pm.push_back(raw.probabilities()[i]);
    qm.push_back(q);
    z += q + 1e-9;
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    if (pm[i] > 0.0) kl += pm[i] * std::log(pm[i] * z / (qm[i] + 1e-9));
  }
  return std::max(kl, 0.0);
}

Histogram1D raw_grid_histogram(const std::vector<double>& costs,
                               double resolution) {
  std::map<long, std::size_t> bins;
  double lo = costs[0];
  for (double c : costs) lo = std::min(lo, c);
  const double origin = std::floor(lo / resolution) * resolution;
  for (double c : costs) {
    bins[static_cast<long>(std::floor((c - origin) / resolution))]++;
  }
  std::vector<Bucket> buckets;
  std::vector<double> prs;
  for (const auto& [k, n] : bins) {
    buckets.push_back({origin + k * resolution, origin + (k + 1) * resolution});
    prs.push_back(static_cast<double>(n) / costs.size());
  }
  return Histogram1D(std::move(buckets), std::move(prs));
}

}  // namespace

std::vector<ParametricFit> parametric_fit_kls(const std::vector<double>& costs,
                                              int folds, double sig,
                                              double resolution) {
  const Histogram1D raw = raw_grid_histogram(costs, resolution);
  std::vector<ParametricFit> out;

  const Histogram1D auto_hist = build_1d(costs, folds, sig, resolution);
  out.push_back({"auto-hist", kl_divergence(raw, auto_hist), entropy(auto_hist)});

  const double mean = mean_of(costs);
  double var = 0.0;
  for (double c : costs) var += (c - mean) * (c - mean);
  var /= costs.size();
  const double sigma = std::max(std::sqrt(var), resolution * 1e-3);
  const auto gauss_cdf = [&](double x) {
    return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0)));
  };
  out.push_back({"fit-gaussian", kl_raw_vs_cdf(raw, gauss_cdf), 0.0});

  const GammaFit gf = fit_gamma_mle(costs);
  const auto gamma_cdf = [&](double x) {
    return x <= 0.0 ? 0.0 : gamma_p(gf.shape, gf.rate * x);
  };
  out.push_back({"fit-gamma", kl_raw_vs_cdf(raw, gamma_cdf), 0.0});

  const double lambda = 1.0 / std::max(mean, 1e-9);
  const auto exp_cdf = [&](double x) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-lambda * x);
  };
  out.push_back({"fit-exponential", kl_raw_vs_cdf(raw, exp_cdf), 0.0});
  return out;
}

std::optional<EvalRow> evaluate_method(const std::string& method,
                                       const VariableStore& store,
                                       const TrajectoryStore& trajectories,
                                       const EvalRequest& request,
                                       const Histogram1D& truth,
                                       const EvalOptions& options) {
  EvalRow row;
  std::ostringstream pid;
  for (std::size_t i = 0; i < request.path.edges.size(); ++i) {
    if (i) pid << '|';
    pid << request.path.edges[i];
  }
  row.path_id = pid.str();
  row.cardinality = request.path.cardinality();
  row.method = method;

  const int reps = std::max(1, options.repetitions);
  std::optional<Histogram1D> marginal;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    for (int r = 0; r < reps; ++r) {
      if (method == "ocrv") {
        auto res = estimate(store, request.path, request.depart_minute);
        row.entropy = res.entropy_of_joint;
        row.variables_used = res.crv.size();
        marginal = std::move(res.marginal);
      } else if (method == "crv-random") {
        auto res = random_crv(store, request.path, request.depart_minute,
                              options.seed);
        row.entropy = res.entropy_of_joint;
        row.variables_used = res.crv.size();
        marginal = std::move(res.marginal);
      } else if (method == "hp") {
        auto res = hp(store, request.path, request.depart_minute);
        row.entropy = res.entropy_of_joint;
        row.variables_used = res.crv.size();
        marginal = std::move(res.marginal);
      } else if (method == "lb") {
        marginal = lb(store, request.path, request.depart_minute);
        row.entropy = entropy(*marginal);
        row.variables_used = request.path.cardinality();
      } else if (method == "aob") {
        marginal = aob(trajectories, request.path, request.depart_minute,
                       store.params());
        row.entropy = entropy(*marginal);
        row.variables_used = 1;
      } else {
        return std::nullopt;
      }
    }
  } catch (const EstimationError&) {
    return std::nullopt;
  }
  const auto t1 = std::chrono::steady_clock::now();
  row.runtime_us =
      std::chrono::duration<double, std::micro>(t1 - t0).count() / reps;
  row.kl = kl_divergence(truth, *marginal);
  return row;
}

namespace {

std::vector<EvalRow> run_requests(
    const TrajectoryStore& trajectories, const StoreParams& params,
    const std::vector<EvalRequest>& requests, const EvalOptions& options,
    const std::function<const VariableStore&(std::size_t)>& store_for,
    const std::function<Histogram1D(std::size_t)>& truth_for) {
  std::vector<std::vector<EvalRow>> per_request(requests.size());
  parallel_for(requests.size(), options.threads, [&](std::size_t i) {
    const EvalRequest& req = requests[i];
    Histogram1D truth = truth_for(i);
    const VariableStore& store = store_for(i);
    for (const auto& method : options.methods) {
      auto row = evaluate_method(method, store, trajectories, req, truth, options);
      if (row) per_request[i].push_back(std::move(*row));
    }
    if (options.parametric_fits && req.path.cardinality() == 1) {
      const auto intervals = partition_day(params.alpha);
      for (const auto& iv : intervals) {
        if (!iv.contains(req.depart_minute)) continue;
        const auto qualified = trajectories.qualified(req.path, iv);
        if (static_cast<std::int64_t>(qualified.size()) <= params.beta) break;
        std::vector<double> costs;
        for (const auto& cv : qualified) costs.push_back(cv.total());
        for (const auto& fit : parametric_fit_kls(costs, params.folds,
                                                  params.sig, params.resolution)) {
          EvalRow row;
          row.path_id = req.path.edges[0];
          row.cardinality = 1;
          row.method = fit.name;
          row.kl = fit.kl;
          row.entropy = fit.entropy;
          row.runtime_us = 0.0;
          row.variables_used = 1;
          per_request[i].push_back(std::move(row));
        }
        break;
      }
    }
  });
  std::vector<EvalRow> rows;
  for (auto& r : per_request) {
    for (auto& row : r) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<EvalRow> evaluate_holdout(const RoadNetwork& net,
                                      const TrajectoryStore& trajectories,
                                      const StoreParams& params,
                                      const std::vector<EvalRequest>& requests,
                                      const EvalOptions& options) {
  // Per request: ground truth from the full data, then a store learned
  // without the qualifying trajectories.
  std::vector<std::unique_ptr<VariableStore>> stores(requests.size());
  std::vector<std::optional<Histogram1D>> truths(requests.size());
  StoreParams inner = params;
  inner.threads = 1;
  parallel_for(requests.size(), options.threads, [&](std::size_t i) {
    const EvalRequest& req = requests[i];
    truths[i] = aob(trajectories, req.path, req.depart_minute, params);
    const auto intervals = partition_day(params.alpha);
    std::vector<std::string> exclude;
    for (const auto& iv : intervals) {
      if (!iv.contains(req.depart_minute)) continue;
      for (const auto& cv : trajectories.qualified(req.path, iv)) {
        exclude.push_back(cv.trajectory_id);
      }
      break;
    }
    const TrajectoryStore holdout = trajectories.without(exclude, net);
    stores[i] = std::make_unique<VariableStore>(build_store(net, holdout, inner));
  });
  return run_requests(
      trajectories, params, requests, options,
      [&](std::size_t i) -> const VariableStore& { return *stores[i]; },
      [&](std::size_t i) { return *truths[i]; });
}

std::vector<EvalRow> evaluate_generator(const GroundTruthModel& model,
                                        const RoadNetwork& net,
                                        const TrajectoryStore& trajectories,
                                        const StoreParams& params,
                                        const std::vector<EvalRequest>& requests,
                                        const EvalOptions& options) {
  const VariableStore store = build_store(net, trajectories, params);
  const auto intervals = partition_day(params.alpha);
  return run_requests(
      trajectories, params, requests, options,
      [&](std::size_t) -> const VariableStore& { return store; },
      [&](std::size_t i) {
        const EvalRequest& req = requests[i];
        for (const auto& iv : intervals) {
          if (iv.contains(req.depart_minute)) {
            return ground_truth_marginal(model, req.path, iv, params.resolution);
          }
        }
        throw std::invalid_argument("departure outside the day");
      });
}

std::string eval_rows_to_csv(const std::vector<EvalRow>& rows) {
  std::ostringstream out;
  out << "path,cardinality,method,kl,entropy,runtime_us,variables_used\n";
  out.precision(9);
  for (const auto& r : rows) {
    out << r.path_id << ',' << r.cardinality << ',' << r.method << ',' << r.kl
        << ',' << r.entropy << ',' << r.runtime_us << ',' << r.variables_used
        << '\n';
  }
  return out.str();
}

}  // namespace pathcost
