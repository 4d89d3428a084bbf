#include "amodes/graph.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amodes {

std::string Edge::label() const { return std::to_string(u) + "-" + std::to_string(v); }

LinkageGraph::LinkageGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 1) throw std::invalid_argument("linkage graph needs at least one vertex");
  for (const Edge& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    if (e.u < 1 || e.v > n_) throw std::invalid_argument("edge " + e.label() + " out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("duplicate edge");
}

bool LinkageGraph::has_edge(int a, int b) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
}

std::vector<Edge> LinkageGraph::non_edges() const {
  std::vector<Edge> out;
  for (int i = 1; i <= n_; ++i)
    for (int j = i + 1; j <= n_; ++j)
      if (!has_edge(i, j)) out.emplace_back(i, j);
  return out;
}

HennebergStep HennebergStep::h1(int a, int b) { return {HennebergKind::H1, {a, b}, std::nullopt}; }

HennebergStep HennebergStep::h2(int a, int b, int c, Edge removed) {
  return {HennebergKind::H2, {a, b, c}, removed};
}

std::string to_string(TopologyId id) {
  switch (id) {
    case TopologyId::V17: return "v17";
    case TopologyId::V37: return "v37";
    case TopologyId::V67: return "v67";
  }
  throw std::invalid_argument("unknown topology id");
}

TopologyId parse_topology(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "v17") return TopologyId::V17;
  if (s == "v37") return TopologyId::V37;
  if (s == "v67") return TopologyId::V67;
  throw std::invalid_argument("unknown topology '" + std::string(name) + "' (expected v17, v37 or v67)");
}

LinkageGraph apply_henneberg(const LinkageGraph& g, const HennebergStep& s) {
  const std::size_t want = s.kind == HennebergKind::H1 ? 2 : 3;
  if (s.attach.size() != want) throw std::invalid_argument("wrong number of attach vertices");
  for (int a : s.attach)
    if (a < 1 || a > g.vertex_count())
      throw std::invalid_argument("attach vertex " + std::to_string(a) + " does not exist");
  for (std::size_t i = 0; i < s.attach.size(); ++i)
    for (std::size_t j = i + 1; j < s.attach.size(); ++j)
      if (s.attach[i] == s.attach[j]) throw std::invalid_argument("attach vertices must be distinct");

  std::vector<Edge> edges = g.edges();
  if (s.kind == HennebergKind::H2) {
    if (!s.removed) throw std::invalid_argument("H2 step needs an edge to remove");
    const Edge r = *s.removed;
    auto among = [&](int x) { return std::find(s.attach.begin(), s.attach.end(), x) != s.attach.end(); };
    if (!among(r.u) || !among(r.v))
      throw std::invalid_argument("removed edge " + r.label() + " does not join attach vertices");
    auto it = std::find(edges.begin(), edges.end(), r);
    if (it == edges.end()) throw std::invalid_argument("removed edge " + r.label() + " is absent");
    edges.erase(it);
  }
  const int fresh = g.vertex_count() + 1;
  for (int a : s.attach) edges.emplace_back(a, fresh);
  return LinkageGraph(fresh, std::move(edges));
}

bool is_laman(const LinkageGraph& g) {
  const int n = g.vertex_count();
  if (n < 2) return g.edge_count() == 0;
  if (n > 10) throw std::invalid_argument("exhaustive Laman check limited to n <= 10");
  if (static_cast<int>(g.edge_count()) != 2 * n - 3) return false;
  std::vector<unsigned> masks;
  masks.reserve(g.edge_count());
  for (const Edge& e : g.edges()) masks.push_back((1u << (e.u - 1)) | (1u << (e.v - 1)));
  const unsigned full = (1u << n) - 1;
  for (unsigned sub = 1; sub < full; ++sub) {
    const int k = std::popcount(sub);
    if (k < 2) continue;
    int inside = 0;
    for (unsigned m : masks) inside += (m & sub) == m;
    if (inside > 2 * k - 3) return false;
  }
  return true;
}

namespace {

// (2,3)-pebble game over a directed pebble graph.
class PebbleGame {
 public:
  explicit PebbleGame(int n) : pebbles_(n + 1, 2), out_(n + 1) {}

  bool try_insert(int u, int v) {
    while (pebbles_[u] + pebbles_[v] < 4) {
      const int root = pebbles_[u] < 2 ? u : v;
      if (!fetch(root, u, v)) return false;
    }
    --pebbles_[u];
    out_[u].push_back(v);
    return true;
  }

 private:
  // Move one free pebble to root along a directed path avoiding u and v.
  bool fetch(int root, int u, int v) {
    std::vector<int> parent(out_.size(), 0);
    std::vector<bool> seen(out_.size(), false);
    seen[u] = seen[v] = true;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : out_[x]) {
        if (seen[y]) continue;
        seen[y] = true;
        parent[y] = x;
        if (pebbles_[y] > 0) {
          --pebbles_[y];
          ++pebbles_[root];
          for (int w = y; w != root; w = parent[w]) reverse(parent[w], w);
          return true;
        }
        stack.push_back(y);
      }
    }
    return false;
  }

  void reverse(int from, int to) {
    auto& list = out_[from];
    list.erase(std::find(list.begin(), list.end(), to));
    out_[to].push_back(from);
  }

  std::vector<int> pebbles_;
  std::vector<std::vector<int>> out_;
};

}  // namespace

bool is_laman_pebble(const LinkageGraph& g) {
  const int n = g.vertex_count();
  if (n < 2) return g.edge_count() == 0;
  if (static_cast<int>(g.edge_count()) != 2 * n - 3) return false;
  PebbleGame game(n);
  for (const Edge& e : g.edges())
    if (!game.try_insert(e.u, e.v)) return false;
  return true;
}

LinkageGraph triangle() { return LinkageGraph(3, {{1, 2}, {1, 3}, {2, 3}}); }

LinkageGraph desargues_graph() {
  return LinkageGraph(6, {{1, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {5, 6}, {1, 4}, {2, 5}, {3, 6}});
}

LinkageGraph builtin_topology(TopologyId id) {
  // H2 on the Desargues graph: drop (4,5), join the new vertex 7 to 4, 5 and
  // one more vertex.
  int third = 0;
  switch (id) {
    case TopologyId::V17: third = 1; break;
    case TopologyId::V37: third = 3; break;
    case TopologyId::V67: third = 6; break;
    default: throw std::invalid_argument("unknown topology id");
  }
  return apply_henneberg(desargues_graph(), HennebergStep::h2(4, 5, third, Edge(4, 5)));
}

ClosedFormBounds closed_form_bounds(int n) {
  if (n < 3) throw std::invalid_argument("bounds need n >= 3");
  static constexpr std::array<long, 8> kUpper{2, 4, 8, 24, 64, 128, 512, 2048};
  static constexpr std::array<long, 8> kLower{2, 4, 8, 24, 48, 96, 288, 576};
  ClosedFormBounds b;
  b.n = n;
  b.bezout = std::pow(4.0, n - 2);
  b.general_upper = b.bezout / std::sqrt(std::numbers::pi * (n - 2));
  b.fan_lower = 2.0 * std::pow(28.0, (n - 3) / 4);
  if (n <= 10) {
    b.table_upper = kUpper[n - 3];
    b.table_lower = kLower[n - 3];
  }
  return b;
}

nlohmann::json to_json(const LinkageGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.vertex_count()}, {"edges", edges}};
}

LinkageGraph graph_from_json(const nlohmann::json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edge must be a pair");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return LinkageGraph(j.at("n").get<int>(), std::move(edges));
}

}  // namespace amodes
