#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pathcost {

using EdgeId = std::string;
using VertexId = std::string;

/// Directed road segment.
struct Edge {
  EdgeId id;
  VertexId start;
  VertexId end;
  double length_m = 0.0;
  double speed_limit_kmh = 0.0;

  /// Free-flow traversal time in seconds at the speed limit.
  double speed_limit_travel_time_s() const {
    return 3.6 * length_m / speed_limit_kmh;
  }
};

/// Sequence of adjacent edges visiting distinct vertices. Only constructible
/// through RoadNetwork::make_path (or as a sub-path of a valid path), so a
/// Path value is valid by construction.
struct Path {
  std::vector<EdgeId> edges;

  std::size_t cardinality() const { return edges.size(); }
  Path sub(std::size_t pos, std::size_t len) const {
    return Path{{edges.begin() + pos, edges.begin() + pos + len}};
  }
  friend bool operator==(const Path&, const Path&) = default;
};

class RoadNetwork {
 public:
  void add_edge(Edge e);

  /// Loads `edge_id,from_vertex,to_vertex,length_m,speed_limit_kmh` rows.
  static RoadNetwork from_csv_file(const std::string& filename);

  bool has_edge(const EdgeId& id) const { return edges_.count(id) != 0; }
  const Edge& edge(const EdgeId& id) const;
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::vector<EdgeId> edge_ids_sorted() const;

  /// Edges leaving the given vertex.
  const std::vector<EdgeId>& outgoing(const VertexId& v) const;

  bool adjacent(const EdgeId& a, const EdgeId& b) const;

  /// Validates adjacency and vertex distinctness; nullopt on empty input.
  std::optional<Path> make_path(const std::vector<EdgeId>& edges) const;

 private:
  std::unordered_map<EdgeId, Edge> edges_;
  std::unordered_set<VertexId> vertices_;
  std::unordered_map<VertexId, std::vector<EdgeId>> out_;
};

/// p1 ∘ p2 when the junction edges are adjacent and the result still visits
/// distinct vertices; empty otherwise.
std::optional<Path> concat(const RoadNetwork& net, const Path& p1, const Path& p2);

/// True iff p_sub occurs as a contiguous run of edges inside p.
bool is_subpath(const Path& p_sub, const Path& p);

/// Position of the first (only, for valid paths) occurrence, if any.
std::optional<std::size_t> subpath_position(const Path& p_sub, const Path& p);

}  // namespace pathcost
