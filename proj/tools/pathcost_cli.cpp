// pathcost: learn time-varying joint travel-cost distributions from
// trajectories and estimate full path-cost distributions at query time.
//
//   pathcost gen    --spec corridor.json --trajs 10000 --seed 7 --out data/
//   pathcost learn  --network net.csv --traj t.jsonl --alpha 30 --beta 30
//                   --folds 10 --out model.json
//   pathcost query  --model model.json --network net.csv --path e1,e2,e3
//                   --depart 08:00 --method ocrv
//   pathcost eval   --model model.json --network net.csv --traj t.jsonl
//                   --paths-file paths.txt [--truth spec.json] --out report.csv

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathcost/baselines.hpp"
#include "pathcost/eval.hpp"
#include "pathcost/model_io.hpp"
#include "pathcost/synthgen.hpp"
#include "pathcost/time_util.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitEstimation = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

pathcost::Path parse_path(const pathcost::RoadNetwork& net,
                          const std::string& spec) {
  const auto edges = split(spec, ',');
  auto p = net.make_path(edges);
  if (!p) throw CLI::ValidationError("--path", "not a valid path: " + spec);
  return *p;
}

int cmd_gen(const std::string& spec_file, std::size_t trajs,
            std::optional<std::uint64_t> seed, const std::string& out_dir) {
  auto model = pathcost::GroundTruthModel::from_json_file(spec_file);
  if (seed) model.seed = *seed;
  const auto net = pathcost::gen_network(model);
  std::filesystem::create_directories(out_dir);
  const auto net_file = out_dir + "/network.csv";
  const auto traj_file = out_dir + "/trajectories.jsonl";
  pathcost::write_network_csv(net_file, net);
  pathcost::write_trajectories_jsonl(traj_file,
                                     pathcost::gen_trajectories(model, trajs));
  std::cout << "wrote " << net_file << " (" << net.edge_count() << " edges) and "
            << traj_file << " (" << trajs << " trajectories)\n";
  return 0;
}

int cmd_learn(const std::string& network_file, const std::string& traj_file,
              const pathcost::StoreParams& params, const std::string& out_file) {
  const auto net = pathcost::RoadNetwork::from_csv_file(network_file);
  const auto store = pathcost::TrajectoryStore::ingest(
      net, pathcost::load_trajectories_jsonl(traj_file), params.tz_offset_minutes);
  const auto model = pathcost::build_store(net, store, params);
  pathcost::save_model(out_file, model);

  std::set<pathcost::EdgeId> learned_edges;
  for (const auto& v : model.variables()) {
    if (v.source == pathcost::VariableSource::kLearnedFromData) {
      learned_edges.insert(v.path.edges.begin(), v.path.edges.end());
    }
  }
  const auto observed = store.observed_edges();
  std::cout << "model written to " << out_file << "\n";
  std::cout << "variables per rank:";
  for (const auto& [rank, count] : model.rank_histogram()) {
    std::cout << ' ' << rank << ':' << count;
  }
  std::cout << "\ncoverage: " << learned_edges.size() << '/' << observed.size();
  if (!observed.empty()) {
    std::cout << " ("
              << 100.0 * static_cast<double>(learned_edges.size()) /
                     static_cast<double>(observed.size())
              << "%)";
  }
  std::cout << '\n';
  return 0;
}

nlohmann::ordered_json result_json(const pathcost::Path& path,
                                   const std::string& depart,
                                   const std::string& method,
                                   const pathcost::Histogram1D& marginal,
                                   double entropy_value,
                                   const pathcost::Crv* crv) {
  nlohmann::ordered_json j;
  j["path"] = path.edges;
  j["depart"] = depart;
  j["method"] = method;
  auto& buckets = j["buckets"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < marginal.size(); ++i) {
    nlohmann::ordered_json b;
    b["l"] = marginal.buckets()[i].lo;
    b["u"] = marginal.buckets()[i].hi;
    b["pr"] = marginal.probabilities()[i];
    buckets.push_back(std::move(b));
  }
  j["entropy"] = entropy_value;
  auto& jcrv = j["crv"] = nlohmann::ordered_json::array();
  if (crv) {
    for (const auto& e : *crv) {
      nlohmann::ordered_json je;
      je["path"] = e.var->path.edges;
      je["interval"] = {e.var->interval.start, e.var->interval.end};
      je["rank"] = e.var->rank();
      jcrv.push_back(std::move(je));
    }
  }
  return j;
}

int cmd_query(const std::string& model_file, const std::string& network_file,
              const std::string& traj_file, const std::string& path_spec,
              const std::string& depart, const std::string& method,
              std::uint64_t seed) {
  const auto net = pathcost::RoadNetwork::from_csv_file(network_file);
  const auto store = pathcost::load_model(model_file);
  const auto path = parse_path(net, path_spec);
  const double t = pathcost::parse_hhmm(depart);

  nlohmann::ordered_json out;
  if (method == "ocrv") {
    const auto res = pathcost::estimate(store, path, t);
    out = result_json(path, depart, method, res.marginal, res.entropy_of_joint,
                      &res.crv);
  } else if (method == "lb") {
    const auto h = pathcost::lb(store, path, t);
    out = result_json(path, depart, method, h, pathcost::entropy(h), nullptr);
  } else if (method == "hp") {
    const auto res = pathcost::hp(store, path, t);
    out = result_json(path, depart, method, res.marginal, res.entropy_of_joint,
                      &res.crv);
  } else if (method == "crv-random") {
    const auto res = pathcost::random_crv(store, path, t, seed);
    out = result_json(path, depart, method, res.marginal, res.entropy_of_joint,
                      &res.crv);
  } else if (method == "aob") {
    if (traj_file.empty()) {
      throw CLI::ValidationError("--method", "aob requires --traj");
    }
    const auto trajs = pathcost::TrajectoryStore::ingest(
        net, pathcost::load_trajectories_jsonl(traj_file),
        store.params().tz_offset_minutes);
    const auto h = pathcost::aob(trajs, path, t, store.params());
    out = result_json(path, depart, method, h, pathcost::entropy(h), nullptr);
  } else {
    throw CLI::ValidationError("--method", "unknown method " + method);
  }
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_eval(const std::string& model_file, const std::string& network_file,
             const std::string& traj_file, const std::string& paths_file,
             const std::string& truth_spec, const std::string& out_file,
             const pathcost::StoreParams& params_in, std::uint64_t seed) {
  const auto net = pathcost::RoadNetwork::from_csv_file(network_file);
  pathcost::StoreParams params = params_in;
  if (!model_file.empty()) {
    params = pathcost::load_model(model_file).params();
  }
  const auto trajs = pathcost::TrajectoryStore::ingest(
      net, pathcost::load_trajectories_jsonl(traj_file), params.tz_offset_minutes);

  std::vector<pathcost::EvalRequest> requests;
  std::ifstream pf(paths_file);
  if (!pf) throw CLI::ValidationError("--paths-file", "cannot open " + paths_file);
  std::string line;
  while (std::getline(pf, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string pspec, tspec;
    if (!(ss >> pspec >> tspec)) {
      throw CLI::ValidationError("--paths-file", "malformed line: " + line);
    }
    requests.push_back({parse_path(net, pspec), pathcost::parse_hhmm(tspec)});
  }

  pathcost::EvalOptions options;
  options.seed = seed;
  std::vector<pathcost::EvalRow> rows;
  if (!truth_spec.empty()) {
    const auto model = pathcost::GroundTruthModel::from_json_file(truth_spec);
    rows = pathcost::evaluate_generator(model, net, trajs, params, requests, options);
  } else {
    rows = pathcost::evaluate_holdout(net, trajs, params, requests, options);
  }
  const std::string csv = pathcost::eval_rows_to_csv(rows);
  if (out_file.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_file);
    out << csv;
    std::cout << "report written to " << out_file << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"travel-cost distribution estimation from trajectory data"};
  app.require_subcommand(1);

  pathcost::StoreParams params;

  std::string network_file, traj_file, model_file, out_path, path_spec, depart;
  std::string method = "ocrv", spec_file, paths_file, truth_spec;
  std::size_t trajs = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* gen = app.add_subcommand("gen", "generate a synthetic benchmark");
  gen->add_option("--spec", spec_file, "model spec JSON")->required();
  gen->add_option("--trajs", trajs, "number of trajectories")->required();
  gen->add_option("--seed", seed, "override the spec seed")
      ->each([&](const std::string&) { seed_set = true; });
  gen->add_option("--out", out_path, "output directory")->required();

  auto* learn = app.add_subcommand("learn", "learn a variable store");
  learn->add_option("--network", network_file, "network CSV")->required();
  learn->add_option("--traj", traj_file, "trajectory JSONL")->required();
  learn->add_option("--alpha", params.alpha, "interval width, minutes")
      ->check(CLI::Range(1.0, 1440.0));
  learn->add_option("--beta", params.beta, "qualified-count threshold");
  learn->add_option("--folds", params.folds, "cross-validation folds");
  learn->add_option("--sig", params.sig, "significance threshold");
  learn->add_option("--out", out_path, "model output file")->required();

  auto* query = app.add_subcommand("query", "estimate a path cost distribution");
  query->add_option("--model", model_file, "model file")->required();
  query->add_option("--network", network_file, "network CSV")->required();
  query->add_option("--traj", traj_file, "trajectory JSONL (aob only)");
  query->add_option("--path", path_spec, "comma-separated edge ids")->required();
  query->add_option("--depart", depart, "departure time HH:MM")->required();
  query->add_option("--method", method, "aob|lb|hp|crv-random|ocrv");
  query->add_option("--seed", seed, "crv-random seed");

  auto* eval = app.add_subcommand("eval", "evaluate methods against ground truth");
  eval->add_option("--model", model_file, "model file (for parameters)");
  eval->add_option("--network", network_file, "network CSV")->required();
  eval->add_option("--traj", traj_file, "trajectory JSONL")->required();
  eval->add_option("--paths-file", paths_file, "lines: edge,edge,... HH:MM")
      ->required();
  eval->add_option("--truth", truth_spec, "generator spec (else holdout aob)");
  eval->add_option("--alpha", params.alpha, "interval width, minutes")
      ->check(CLI::Range(1.0, 1440.0));
  eval->add_option("--beta", params.beta, "qualified-count threshold");
  eval->add_option("--folds", params.folds, "cross-validation folds");
  eval->add_option("--sig", params.sig, "significance threshold");
  eval->add_option("--seed", seed, "crv-random seed");
  eval->add_option("--out", out_path, "CSV output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_gen(spec_file, trajs,
                     seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt,
                     out_path);
    }
    if (learn->parsed()) return cmd_learn(network_file, traj_file, params, out_path);
    if (query->parsed()) {
      return cmd_query(model_file, network_file, traj_file, path_spec, depart,
                       method, seed);
    }
    if (eval->parsed()) {
      return cmd_eval(model_file, network_file, traj_file, paths_file,
                      truth_spec, out_path, params, seed);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pathcost::EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
