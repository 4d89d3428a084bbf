#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "amodes/graph.hpp"

using namespace amodes;

namespace {

std::vector<Edge> all_pairs(int n) {
  std::vector<Edge> out;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) out.emplace_back(a, b);
  return out;
}

// Calls f on every graph with n vertices and exactly m edges.
template <class F>
void for_each_graph(int n, int m, F f) {
  const auto pairs = all_pairs(n);
  std::vector<int> pick(pairs.size(), 0);
  std::fill(pick.end() - m, pick.end(), 1);
  do {
    std::vector<Edge> es;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pick[i]) es.push_back(pairs[i]);
    f(LinkageGraph(n, es));
  } while (std::next_permutation(pick.begin(), pick.end()));
}

std::vector<LinkageGraph> laman_graphs(int n) {
  std::vector<LinkageGraph> out;
  for_each_graph(n, 2 * n - 3, [&](const LinkageGraph& g) {
    if (is_laman_pebble(g)) out.push_back(g);
  });
  return out;
}

// Straight from the definition, independent of the library's checker.
bool laman_by_definition(const LinkageGraph& g) {
  const int n = g.vertex_count();
  if (static_cast<int>(g.edge_count()) != 2 * n - 3) return false;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int k = __builtin_popcount(mask);
    if (k < 2 || k == n) continue;
    int inside = 0;
    for (const auto& e : g.edges())
      if ((mask >> (e.u - 1) & 1) && (mask >> (e.v - 1) & 1)) ++inside;
    if (inside > 2 * k - 3) return false;
  }
  return true;
}

const std::vector<Edge> kV17{{1, 2}, {1, 3}, {1, 4}, {1, 7}, {2, 3}, {2, 5},
                             {3, 6}, {4, 6}, {4, 7}, {5, 6}, {5, 7}};

}  // namespace

TEST_CASE("edges are canonical and graphs reject bad input") {
  CHECK(Edge(5, 2) == Edge(2, 5));
  CHECK(Edge(7, 1).label() == "1-7");
  CHECK_THROWS_AS(LinkageGraph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(LinkageGraph(3, {{1, 2}, {2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(LinkageGraph(3, {{1, 4}}), std::invalid_argument);
  CHECK(LinkageGraph(3, {{2, 3}, {1, 2}}) == LinkageGraph(3, {{1, 2}, {2, 3}}));
}

TEST_CASE("laman examples") {
  CHECK(is_laman(triangle()));
  CHECK(is_laman_pebble(triangle()));
  const LinkageGraph k4(4, all_pairs(4));
  CHECK_FALSE(is_laman(k4));
  CHECK_FALSE(is_laman_pebble(k4));
  CHECK(is_laman(desargues_graph()));
  // right edge count, but a K4 inside
  LinkageGraph dense(5, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}, {4, 5}});
  CHECK_FALSE(is_laman(dense));
  CHECK_FALSE(is_laman_pebble(dense));
}

TEST_CASE("henneberg examples") {
  const auto g4 = apply_henneberg(triangle(), HennebergStep::h1(1, 2));
  CHECK(g4.vertex_count() == 4);
  CHECK(g4.edge_count() == 5);
  const auto g5 = apply_henneberg(g4, HennebergStep::h1(3, 4));
  CHECK(g5.vertex_count() == 5);
  CHECK(g5.edge_count() == 7);
  CHECK(is_laman(g5));

  const auto v17 = apply_henneberg(desargues_graph(), HennebergStep::h2(4, 5, 1, Edge(4, 5)));
  CHECK(v17.edges() == kV17);
  CHECK(v17 == builtin_topology(TopologyId::V17));

  // removed edge must exist and join two attach vertices
  CHECK_THROWS_AS(apply_henneberg(desargues_graph(), HennebergStep::h2(4, 5, 1, Edge(2, 3))),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_henneberg(desargues_graph(), HennebergStep::h2(1, 2, 5, Edge(1, 5))),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_henneberg(triangle(), HennebergStep::h1(1, 1)), std::invalid_argument);
}

TEST_CASE("builtin topologies") {
  const auto v17 = builtin_topology(TopologyId::V17);
  const auto v37 = builtin_topology(TopologyId::V37);
  const auto v67 = builtin_topology(TopologyId::V67);
  CHECK(v17.edges() == kV17);
  auto swap17 = [&](Edge to) {
    auto es = kV17;
    std::replace(es.begin(), es.end(), Edge(1, 7), to);
    std::sort(es.begin(), es.end());
    return es;
  };
  CHECK(v37.edges() == swap17(Edge(3, 7)));
  CHECK(v67.edges() == swap17(Edge(6, 7)));
  for (const auto& g : {v17, v37, v67}) {
    CHECK(g.vertex_count() == 7);
    CHECK(g.edge_count() == 11);
    CHECK(is_laman(g));
    CHECK(is_laman_pebble(g));
    CHECK(g.non_edges().size() == 10);
  }
  CHECK(parse_topology("V37") == TopologyId::V37);
  CHECK(parse_topology("v67") == TopologyId::V67);
  CHECK(to_string(TopologyId::V17) == "v17");
  CHECK_THROWS_AS(parse_topology("v27"), std::invalid_argument);
}

TEST_CASE("sigma = (2 3)(5 6)(4 7) is an automorphism of V17") {
  const std::map<int, int> sigma{{1, 1}, {2, 3}, {3, 2}, {4, 7}, {5, 6}, {6, 5}, {7, 4}};
  std::vector<Edge> image;
  for (const auto& e : kV17) image.emplace_back(sigma.at(e.u), sigma.at(e.v));
  std::sort(image.begin(), image.end());
  CHECK(image == kV17);
}

TEST_CASE("pebble game agrees with the definition on every 2n-3 edge graph, n <= 7") {
  for (int n = 3; n <= 7; ++n) {
    long total = 0, laman = 0, mismatch = 0;
    for_each_graph(n, 2 * n - 3, [&](const LinkageGraph& g) {
      const bool want = laman_by_definition(g);
      ++total;
      laman += want;
      mismatch += (is_laman_pebble(g) != want);
      if (n <= 6) mismatch += (is_laman(g) != want);
    });
    CAPTURE(n);
    CHECK(mismatch == 0);
    if (n == 3) CHECK(laman == 1);
    if (n == 4) CHECK(laman == 6);  // K4 minus any edge
  }
}

TEST_CASE("pebble game agrees with the definition for other edge counts") {
  for (int n = 3; n <= 5; ++n)
    for (int m = 0; m <= n * (n - 1) / 2; ++m)
      for_each_graph(n, m, [&](const LinkageGraph& g) { CHECK(is_laman_pebble(g) == laman_by_definition(g)); });
}

TEST_CASE("henneberg steps preserve the laman property, all inputs up to n = 6") {
  long steps = 0, failures = 0;
  for (int n = 3; n <= 6; ++n) {
    for (const auto& g : laman_graphs(n)) {
      for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) {
          const auto h = apply_henneberg(g, HennebergStep::h1(a, b));
          ++steps;
          failures += !(h.edge_count() == g.edge_count() + 2 && is_laman_pebble(h));
          for (int c = b + 1; c <= n; ++c)
            for (const Edge e : {Edge(a, b), Edge(a, c), Edge(b, c)}) {
              if (!g.has_edge(e)) continue;
              const auto h2 = apply_henneberg(g, HennebergStep::h2(a, b, c, e));
              ++steps;
              failures += !(h2.vertex_count() == n + 1 && h2.edge_count() == g.edge_count() + 2 &&
                            is_laman_pebble(h2));
            }
        }
    }
  }
  CHECK(steps > 100000);
  CHECK(failures == 0);
}

TEST_CASE("closed form bounds") {
  const auto b7 = closed_form_bounds(7);
  CHECK(b7.fan_lower == 56);
  CHECK(b7.bezout == 1024);
  CHECK(b7.general_upper == doctest::Approx(1024 / std::sqrt(M_PI * 5)));
  const auto b10 = closed_form_bounds(10);
  REQUIRE(b10.table_upper);
  REQUIRE(b10.table_lower);
  CHECK(*b10.table_upper == 2048);
  CHECK(*b10.table_lower == 576);
  CHECK_FALSE(closed_form_bounds(11).table_upper);
  for (int n = 7; n <= 20; ++n) CHECK(closed_form_bounds(n).fan_lower / closed_form_bounds(n - 4).fan_lower == 28);
  CHECK(std::pow(28.0, 0.25) == doctest::Approx(2.3003).epsilon(1e-4));
  CHECK_THROWS_AS(closed_form_bounds(1), std::invalid_argument);
}

TEST_CASE("graph json round trip") {
  const auto g = builtin_topology(TopologyId::V67);
  CHECK(graph_from_json(to_json(g)) == g);
}
