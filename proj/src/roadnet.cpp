#include "pathcost/roadnet.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pathcost {

void RoadNetwork::add_edge(Edge e) {
  if (e.id.empty()) throw std::invalid_argument("edge with empty id");
  if (e.start == e.end) throw std::invalid_argument("edge " + e.id + ": start == end");
  if (!(e.length_m > 0.0)) throw std::invalid_argument("edge " + e.id + ": length <= 0");
  if (!(e.speed_limit_kmh > 0.0)) {
    throw std::invalid_argument("edge " + e.id + ": speed limit <= 0");
  }
  if (edges_.count(e.id)) throw std::invalid_argument("duplicate edge id " + e.id);
  vertices_.insert(e.start);
  vertices_.insert(e.end);
  out_[e.start].push_back(e.id);
  edges_.emplace(e.id, std::move(e));
}

RoadNetwork RoadNetwork::from_csv_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open network file " + filename);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(filename + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "edge_id,from_vertex,to_vertex,length_m,speed_limit_kmh") {
    throw std::runtime_error(filename + ": unexpected header '" + line + "'");
  }
  RoadNetwork net;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, from, to, len, speed;
    if (!std::getline(ss, id, ',') || !std::getline(ss, from, ',') ||
        !std::getline(ss, to, ',') || !std::getline(ss, len, ',') ||
        !std::getline(ss, speed, ',')) {
      throw std::runtime_error(filename + ":" + std::to_string(lineno) +
                               ": malformed row");
    }
    try {
      net.add_edge({id, from, to, std::stod(len), std::stod(speed)});
    } catch (const std::exception& e) {
      throw std::runtime_error(filename + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return net;
}

const Edge& RoadNetwork::edge(const EdgeId& id) const {
  const auto it = edges_.find(id);
  if (it == edges_.end()) throw std::out_of_range("unknown edge id " + id);
  return it->second;
}

std::vector<EdgeId> RoadNetwork::edge_ids_sorted() const {
  std::vector<EdgeId> ids;
  ids.reserve(edges_.size());
  for (const auto& [id, e] : edges_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

const std::vector<EdgeId>& RoadNetwork::outgoing(const VertexId& v) const {
  static const std::vector<EdgeId> kNone;
  const auto it = out_.find(v);
  return it == out_.end() ? kNone : it->second;
}

bool RoadNetwork::adjacent(const EdgeId& a, const EdgeId& b) const {
  return edge(a).end == edge(b).start;
}

std::optional<Path> RoadNetwork::make_path(const std::vector<EdgeId>& edges) const {
  if (edges.empty()) return std::nullopt;
  std::unordered_set<VertexId> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edge(edges[i]);
    if (i + 1 < edges.size() && e.end != edge(edges[i + 1]).start) {
      return std::nullopt;
    }
    if (!seen.insert(e.start).second) return std::nullopt;
  }
  if (!seen.insert(edge(edges.back()).end).second) return std::nullopt;
  return Path{edges};
}

std::optional<Path> concat(const RoadNetwork& net, const Path& p1, const Path& p2) {
  if (p1.edges.empty() || p2.edges.empty()) return std::nullopt;
  if (!net.adjacent(p1.edges.back(), p2.edges.front())) return std::nullopt;
  std::vector<EdgeId> joined = p1.edges;
  joined.insert(joined.end(), p2.edges.begin(), p2.edges.end());
  return net.make_path(joined);
}

bool is_subpath(const Path& p_sub, const Path& p) {
  return subpath_position(p_sub, p).has_value();
}

std::optional<std::size_t> subpath_position(const Path& p_sub, const Path& p) {
  if (p_sub.edges.empty() || p_sub.edges.size() > p.edges.size()) {
    return std::nullopt;
  }
  const auto it = std::search(p.edges.begin(), p.edges.end(),
                              p_sub.edges.begin(), p_sub.edges.end());
  if (it == p.edges.end()) return std::nullopt;
  return static_cast<std::size_t>(it - p.edges.begin());
}

}  // namespace pathcost
