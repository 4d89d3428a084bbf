#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace amodes {

/// Unordered vertex pair with 1-based labels, stored as (min, max).
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
  std::string label() const;  // "1-2"
};

/// Planar bar linkage graph. Vertices are 1..n, edges are kept sorted so that
/// two graphs with the same edge set compare equal.
class LinkageGraph {
 public:
  LinkageGraph() = default;
  LinkageGraph(int n, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(int a, int b) const;
  bool has_edge(Edge e) const { return has_edge(e.u, e.v); }

  /// Vertex pairs that are not edges, in lexicographic order.
  std::vector<Edge> non_edges() const;

  friend bool operator==(const LinkageGraph&, const LinkageGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

enum class HennebergKind { H1, H2 };

struct HennebergStep {
  HennebergKind kind = HennebergKind::H1;
  std::vector<int> attach;       // two vertices for H1, three for H2
  std::optional<Edge> removed;   // H2 only; must join two attach vertices

  static HennebergStep h1(int a, int b);
  static HennebergStep h2(int a, int b, int c, Edge removed);
};

/// The three H2 extensions of the Desargues graph that matter for n = 7.
enum class TopologyId { V17, V37, V67 };

std::string to_string(TopologyId id);
TopologyId parse_topology(std::string_view name);  // "v17", "V37", ...

/// Adds vertex n+1. Throws std::invalid_argument on a bad step.
LinkageGraph apply_henneberg(const LinkageGraph& g, const HennebergStep& s);

/// Exhaustive induced-subgraph check; n <= 10 enforced.
bool is_laman(const LinkageGraph& g);

/// (2,3)-pebble game. Same answer as is_laman, polynomial time.
bool is_laman_pebble(const LinkageGraph& g);

LinkageGraph triangle();
/// Desargues (planar parallel robot) graph, vertex labels as in the classical
/// drawing: triangles 1-2-3 and 4-5-6 joined by legs 1-4, 2-5, 3-6.
LinkageGraph desargues_graph();
LinkageGraph builtin_topology(TopologyId id);

struct ClosedFormBounds {
  int n = 0;
  double bezout = 0;         // 4^(n-2)
  double general_upper = 0;  // 4^(n-2) / sqrt(pi (n-2))
  double fan_lower = 0;      // 2 * 28^floor((n-3)/4)
  std::optional<long> table_upper;
  std::optional<long> table_lower;
};

ClosedFormBounds closed_form_bounds(int n);

nlohmann::json to_json(const LinkageGraph& g);
LinkageGraph graph_from_json(const nlohmann::json& j);

}  // namespace amodes
