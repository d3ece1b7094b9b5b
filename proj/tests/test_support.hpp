#pragma once

#include <string>
#include <vector>

#include "pathcost/roadnet.hpp"
#include "pathcost/trajstore.hpp"

namespace test_support {

// Straight-line network e1: a->b, e2: b->c, ...
inline pathcost::RoadNetwork line_network(int edges, double length_m = 500.0,
                                          double speed_kmh = 50.0) {
  pathcost::RoadNetwork net;
  for (int i = 1; i <= edges; ++i) {
    net.add_edge({"e" + std::to_string(i), "n" + std::to_string(i),
                  "n" + std::to_string(i + 1), length_m, speed_kmh});
  }
  return net;
}

inline pathcost::Path line_path(int from, int len) {
  std::vector<pathcost::EdgeId> edges;
  for (int i = 0; i < len; ++i) edges.push_back("e" + std::to_string(from + i));
  return pathcost::Path{edges};
}

// Trajectory over consecutive line edges starting at e`from`, entering at
// `depart_minute` with the given integer second costs.
inline pathcost::Trajectory line_trajectory(const std::string& id, int from,
                                            const std::vector<double>& costs,
                                            double depart_minute) {
  pathcost::Trajectory t;
  t.id = id;
  double enter = 1378771200.0 + depart_minute * 60.0;  // 2013-09-10 UTC midnight
  for (std::size_t k = 0; k < costs.size(); ++k) {
    pathcost::EdgeTraversal rec;
    rec.edge = "e" + std::to_string(from + static_cast<int>(k));
    rec.enter = enter;
    rec.exit = enter + costs[k];
    enter = rec.exit;
    t.records.push_back(rec);
  }
  return t;
}

}  // namespace test_support
