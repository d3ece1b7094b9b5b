#include "pathcost/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "pathcost/time_util.hpp"

namespace pathcost {

namespace {

// 2013-09-10T00:00:00Z, the fixed calendar day synthetic trajectories live on.
const double kEpochBase = static_cast<double>(days_from_civil(2013, 9, 10)) * 86400.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double UniformMixture::mean() const {
  double m = 0.0, w = 0.0;
  for (const auto& p : pieces) {
    m += p.weight * 0.5 * (p.lo + p.hi);
    w += p.weight;
  }
  return m / w;
}

double UniformMixture::min() const {
  double m = pieces.front().lo;
  for (const auto& p : pieces) m = std::min(m, p.lo);
  return m;
}

double UniformMixture::max() const {
  double m = pieces.front().hi;
  for (const auto& p : pieces) m = std::max(m, p.hi);
  return m;
}

double UniformMixture::sample(std::mt19937_64& rng) const {
  double w = 0.0;
  for (const auto& p : pieces) w += p.weight;
  std::uniform_real_distribution<double> u(0.0, w);
  double draw = u(rng);
  const Piece* chosen = &pieces.back();
  for (const auto& p : pieces) {
    if (draw < p.weight) {
      chosen = &p;
      break;
    }
    draw -= p.weight;
  }
  std::uniform_real_distribution<double> v(chosen->lo, chosen->hi);
  return v(rng);
}

static std::vector<CostProfile> profiles_from_json(const nlohmann::json& j) {
  std::vector<CostProfile> out;
  for (const auto& p : j) {
    CostProfile cp;
    cp.interval = {p.at("start").get<double>(), p.at("end").get<double>()};
    for (const auto& m : p.at("mix")) {
      cp.mix.pieces.push_back({m.at("lo").get<double>(), m.at("hi").get<double>(),
                               m.value("w", 1.0)});
    }
    out.push_back(std::move(cp));
  }
  return out;
}

GroundTruthModel GroundTruthModel::from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  GroundTruthModel m;
  if (j.contains("network")) {
    const auto& n = j.at("network");
    m.rows = n.value("rows", 1);
    m.cols = n.value("cols", 2);
    m.edge_length_m = n.value("edge_length_m", 500.0);
    m.speed_limit_kmh = n.value("speed_limit_kmh", 50.0);
  }
  if (m.rows < 1 || m.cols < 1) {
    throw std::invalid_argument("model: grid dimensions must be >= 1");
  }
  m.seed = j.value("seed", 0ull);
  m.rho = j.value("rho", 0.0);
  if (m.rho < 0.0 || m.rho > 1.0) {
    throw std::invalid_argument("model: rho must be in [0, 1]");
  }
  m.integer_costs = j.value("integer_costs", true);
  if (j.contains("depart")) {
    m.depart = {j.at("depart").at("start").get<double>(),
                j.at("depart").at("end").get<double>()};
  }
  if (j.contains("routes")) {
    for (const auto& r : j.at("routes")) {
      RouteSpec rs;
      for (const auto& e : r.at("edges")) rs.edges.push_back(e.get<std::string>());
      rs.weight = r.value("weight", 1.0);
      m.routes.push_back(std::move(rs));
    }
  }
  if (j.contains("default_profile")) {
    m.default_profile = profiles_from_json(j.at("default_profile"));
  }
  if (j.contains("edge_profiles")) {
    for (const auto& [edge, prof] : j.at("edge_profiles").items()) {
      m.edge_profiles[edge] = profiles_from_json(prof);
    }
  }
  return m;
}

GroundTruthModel GroundTruthModel::from_json_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open model spec " + filename);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text);
}

const UniformMixture& GroundTruthModel::mixture_for(const EdgeId& edge,
                                                    double minute) const {
  static const UniformMixture kDefault{{{30.0, 60.0, 1.0}}};
  const double m = std::fmod(minute, kMinutesPerDay);
  const auto it = edge_profiles.find(edge);
  const std::vector<CostProfile>& profs =
      it != edge_profiles.end() ? it->second : default_profile;
  for (const auto& p : profs) {
    if (p.interval.contains(m)) return p.mix;
  }
  if (!default_profile.empty() && it != edge_profiles.end()) {
    for (const auto& p : default_profile) {
      if (p.interval.contains(m)) return p.mix;
    }
  }
  return kDefault;
}

std::vector<RouteSpec> GroundTruthModel::effective_routes() const {
  if (!routes.empty()) return routes;
  std::vector<RouteSpec> out;
  for (int r = 0; r < rows; ++r) {
    if (cols >= 2) out.push_back({corridor_route(cols, r), 1.0});
  }
  if (out.empty()) throw std::invalid_argument("model: no routes available");
  return out;
}

namespace {

VertexId grid_vertex(int r, int c) {
  return "v" + std::to_string(r) + "_" + std::to_string(c);
}

EdgeId grid_edge(int r1, int c1, int r2, int c2) {
  return grid_vertex(r1, c1) + "__" + grid_vertex(r2, c2);
}

}  // namespace

RoadNetwork gen_network(int rows, int cols, double edge_length_m,
                        double speed_limit_kmh) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("gen_network: zero grid");
  RoadNetwork net;
  const auto add = [&](int r1, int c1, int r2, int c2) {
    net.add_edge({grid_edge(r1, c1, r2, c2), grid_vertex(r1, c1),
                  grid_vertex(r2, c2), edge_length_m, speed_limit_kmh});
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      add(r, c, r, c + 1);
      add(r, c + 1, r, c);
    }
  }
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r + 1 < rows; ++r) {
      add(r, c, r + 1, c);
      add(r + 1, c, r, c);
    }
  }
  return net;
}

RoadNetwork gen_network(const GroundTruthModel& model) {
  return gen_network(model.rows, model.cols, model.edge_length_m,
                     model.speed_limit_kmh);
}

std::vector<EdgeId> corridor_route(int cols, int row) {
  std::vector<EdgeId> out;
  for (int c = 0; c + 1 < cols; ++c) out.push_back(grid_edge(row, c, row, c + 1));
  return out;
}

std::vector<double> sample_costs(const GroundTruthModel& model,
                                 const std::vector<EdgeId>& route,
                                 double depart_minute, std::mt19937_64& rng) {
  std::vector<double> costs;
  costs.reserve(route.size());
  double clock = depart_minute;
  double prev_dev = 0.0;
  for (const EdgeId& e : route) {
    const UniformMixture& mix = model.mixture_for(e, clock);
    const double base = mix.sample(rng);
    double c = std::max(0.0, base + model.rho * prev_dev);
    if (model.integer_costs) c = std::max(0.0, std::round(c));
    prev_dev = c - mix.mean();
    costs.push_back(c);
    clock += c / 60.0;
  }
  return costs;
}

std::vector<Trajectory> gen_trajectories(const GroundTruthModel& model,
                                         std::size_t n) {
  const auto routes = model.effective_routes();
  double total_weight = 0.0;
  for (const auto& r : routes) total_weight += r.weight;

  std::vector<Trajectory> out;
  out.reserve(n);
  const int id_width = std::max(6, static_cast<int>(std::to_string(n).size()));
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 rng(splitmix64(model.seed ^ (0x7261764aULL + i)));
    std::uniform_real_distribution<double> rpick(0.0, total_weight);
    double draw = rpick(rng);
    const RouteSpec* route = &routes.back();
    for (const auto& r : routes) {
      if (draw < r.weight) {
        route = &r;
        break;
      }
      draw -= r.weight;
    }
    std::uniform_real_distribution<double> dpick(model.depart.start,
                                                 model.depart.end);
    const double depart_minute = dpick(rng);
    const auto costs = sample_costs(model, route->edges, depart_minute, rng);

    Trajectory t;
    std::string num = std::to_string(i);
    t.id = "t" + std::string(id_width - num.size(), '0') + num;
    double enter = kEpochBase + std::round(depart_minute * 60.0);
    for (std::size_t k = 0; k < route->edges.size(); ++k) {
      EdgeTraversal rec;
      rec.edge = route->edges[k];
      rec.enter = enter;
      rec.exit = enter + std::round(costs[k]);
      if (!model.integer_costs) rec.cost = costs[k];
      enter = rec.exit;
      t.records.push_back(std::move(rec));
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

Histogram1D discretize_samples(const std::vector<double>& samples,
                               double resolution) {
  double lo = samples[0];
  for (double s : samples) lo = std::min(lo, s);
  const double origin = std::floor(lo / resolution) * resolution;
  std::map<long, std::size_t> bins;
  for (double s : samples) {
    bins[static_cast<long>(std::floor((s - origin) / resolution))]++;
  }
  std::vector<Bucket> buckets;
  std::vector<double> prs;
  const double n = static_cast<double>(samples.size());
  for (const auto& [k, count] : bins) {
    buckets.push_back({origin + k * resolution, origin + (k + 1) * resolution});
    prs.push_back(count / n);
  }
  return Histogram1D(std::move(buckets), std::move(prs));
}

}  // namespace

Histogram1D ground_truth_marginal(const GroundTruthModel& model, const Path& p,
                                  const TimeInterval& interval,
                                  double grid_resolution) {
  const auto routes = model.effective_routes();

  // Analytic shortcut: a single uncoupled continuous edge under one profile.
  if (p.cardinality() == 1 && model.rho == 0.0 && !model.integer_costs) {
    const UniformMixture& at_start = model.mixture_for(p.edges[0], interval.start);
    bool single_profile = true;
    for (double m = interval.start; m < interval.end; m += 1.0) {
      if (&model.mixture_for(p.edges[0], m) != &at_start) {
        single_profile = false;
        break;
      }
    }
    if (single_profile) {
      double w = 0.0;
      for (const auto& piece : at_start.pieces) w += piece.weight;
      std::vector<WeightedBucket> pairs;
      for (const auto& piece : at_start.pieces) {
        pairs.push_back({{piece.lo, piece.hi}, piece.weight / w});
      }
      const Histogram1D exact = rearrange(pairs);
      std::vector<double> grid;
      const double origin =
          std::floor(exact.min_cost() / grid_resolution) * grid_resolution;
      for (double g = origin; g < exact.max_cost() + grid_resolution;
           g += grid_resolution) {
        grid.push_back(g);
      }
      return refine(exact, grid);
    }
  }

  double total_weight = 0.0;
  for (const auto& r : routes) total_weight += r.weight;
  std::mt19937_64 rng(splitmix64(model.seed ^ 0x677274ULL));
  std::vector<double> samples;
  samples.reserve(1000000);
  std::size_t draws = 0;
  const std::size_t max_draws = 20000000;
  while (samples.size() < 1000000 && draws < max_draws) {
    ++draws;
    std::uniform_real_distribution<double> rpick(0.0, total_weight);
    double draw = rpick(rng);
    const RouteSpec* route = &routes.back();
    for (const auto& r : routes) {
      if (draw < r.weight) {
        route = &r;
        break;
      }
      draw -= r.weight;
    }
    const auto pos = subpath_position(p, Path{route->edges});
    if (!pos) continue;
    std::uniform_real_distribution<double> dpick(model.depart.start,
                                                 model.depart.end);
    const double depart_minute = dpick(rng);
    const auto costs = sample_costs(model, route->edges, depart_minute, rng);
    double clock_s = std::round(depart_minute * 60.0);
    for (std::size_t k = 0; k < *pos; ++k) clock_s += std::round(costs[k]);
    const double entry_minute = std::fmod(clock_s / 60.0, kMinutesPerDay);
    if (!interval.contains(entry_minute)) continue;
    double total = 0.0;
    for (std::size_t k = 0; k < p.cardinality(); ++k) total += costs[*pos + k];
    samples.push_back(total);
  }
  if (samples.empty()) {
    throw std::invalid_argument(
        "ground_truth_marginal: path unreachable in the model");
  }
  return discretize_samples(samples, grid_resolution);
}

void write_network_csv(const std::string& filename, const RoadNetwork& net) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot write network file " + filename);
  out << "edge_id,from_vertex,to_vertex,length_m,speed_limit_kmh\n";
  for (const EdgeId& id : net.edge_ids_sorted()) {
    const Edge& e = net.edge(id);
    out << e.id << ',' << e.start << ',' << e.end << ',' << e.length_m << ','
        << e.speed_limit_kmh << '\n';
  }
}

}  // namespace pathcost
