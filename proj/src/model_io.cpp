#include "pathcost/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace pathcost {

nlohmann::ordered_json histogram_to_json(const HistogramND& h) {
  nlohmann::ordered_json j;
  j["dims"] = h.dims();
  j["boundaries"] = h.boundaries();
  auto& cells = j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : h.cells()) {
    nlohmann::ordered_json cell;
    cell["idx"] = c.idx;
    cell["pr"] = c.pr;
    cells.push_back(std::move(cell));
  }
  return j;
}

HistogramND histogram_from_json(const nlohmann::json& j) {
  std::vector<std::string> dims = j.at("dims").get<std::vector<std::string>>();
  auto boundaries = j.at("boundaries").get<std::vector<std::vector<double>>>();
  std::vector<NdCell> cells;
  for (const auto& c : j.at("cells")) {
    cells.push_back({c.at("idx").get<std::vector<std::uint32_t>>(),
                     c.at("pr").get<double>()});
  }
  return HistogramND(std::move(dims), std::move(boundaries), std::move(cells));
}

nlohmann::ordered_json model_to_json(const VariableStore& store) {
  const StoreParams& p = store.params();
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["f"] = p.folds;
  j["sig"] = p.sig;
  j["cost_kind"] = p.cost_kind;
  j["resolution"] = p.resolution;
  j["tau_merge"] = p.tau_merge;
  j["tz_offset_minutes"] = p.tz_offset_minutes;
  auto& vars = j["variables"] = nlohmann::ordered_json::array();
  for (const LearnedVariable& v : store.variables()) {
    nlohmann::ordered_json jv;
    jv["path"] = v.path.edges;
    jv["interval"] = {v.interval.start, v.interval.end};
    jv["source"] = v.source == VariableSource::kLearnedFromData ? "data"
                                                                : "speed_limit";
    jv["support"] = v.support_count;
    jv["hist"] = histogram_to_json(v.hist);
    vars.push_back(std::move(jv));
  }
  return j;
}

VariableStore model_from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != 1) {
    throw std::runtime_error("unsupported model version");
  }
  StoreParams p;
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<std::int64_t>();
  p.folds = j.at("f").get<int>();
  p.sig = j.at("sig").get<double>();
  p.cost_kind = j.at("cost_kind").get<std::string>();
  p.resolution = j.value("resolution", 1.0);
  p.tau_merge = j.value("tau_merge", 0.05);
  p.tz_offset_minutes = j.value("tz_offset_minutes", 0.0);
  std::vector<LearnedVariable> vars;
  for (const auto& jv : j.at("variables")) {
    const auto interval = jv.at("interval").get<std::vector<double>>();
    vars.push_back({Path{jv.at("path").get<std::vector<EdgeId>>()},
                    TimeInterval{interval.at(0), interval.at(1)},
                    histogram_from_json(jv.at("hist")),
                    jv.at("support").get<std::int64_t>(),
                    jv.at("source").get<std::string>() == "data"
                        ? VariableSource::kLearnedFromData
                        : VariableSource::kSpeedLimitFallback});
  }
  return VariableStore(std::move(p), std::move(vars));
}

void save_model(const std::string& filename, const VariableStore& store) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot write model file " + filename);
  out << model_to_json(store).dump(2) << '\n';
}

VariableStore load_model(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open model file " + filename);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

}  // namespace pathcost
