#pragma once

#include <string>

#include "json.hpp"
#include "pathcost/learner.hpp"

namespace pathcost {

nlohmann::ordered_json histogram_to_json(const HistogramND& h);
HistogramND histogram_from_json(const nlohmann::json& j);

nlohmann::ordered_json model_to_json(const VariableStore& store);
VariableStore model_from_json(const nlohmann::json& j);

void save_model(const std::string& filename, const VariableStore& store);
VariableStore load_model(const std::string& filename);

}  // namespace pathcost
