#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "amodes/distance_system.hpp"
#include "amodes/mixed_volume.hpp"

using namespace amodes;

namespace {

// Leibniz formula: independent of both library determinants.
Rational leibniz(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  Rational total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += p[i] > p[j];
    Rational term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][p[i]];
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

Rational random_rational(std::mt19937_64& rng, int num_max = 50, int den_max = 9) {
  Rational q(static_cast<long>(rng() % num_max) + 1, static_cast<long>(rng() % den_max) + 1);
  q.canonicalize();
  return q;
}

struct IntPoint {
  long x, y;
};

std::vector<IntPoint> random_points(std::mt19937_64& rng, int n, long range = 1000) {
  std::vector<IntPoint> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back({static_cast<long>(rng() % range), static_cast<long>(rng() % range)});
  return pts;
}

Rational sqdist(const IntPoint& a, const IntPoint& b) {
  const long dx = a.x - b.x, dy = a.y - b.y;
  return Rational(dx * dx + dy * dy);
}

DistanceAssignment lengths_from_points(const LinkageGraph& g, const std::vector<IntPoint>& pts) {
  std::map<Edge, Rational> sq;
  for (const auto& e : g.edges()) sq.emplace(e, sqdist(pts[e.u - 1], pts[e.v - 1]));
  return DistanceAssignment::from_squared(sq);
}

Rational constant_of(const Polynomial& p) {
  REQUIRE(p.total_degree() <= 0);
  return p.is_zero() ? Rational(0) : p.terms().begin()->second;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const std::vector<std::string> v{"x", "y"};
  const auto x = Polynomial::variable(v, 0), y = Polynomial::variable(v, 1);
  const auto sq = (x + y) * (x + y);
  CHECK(sq.term_count() == 3);
  CHECK(sq.terms().at({1, 1}) == 2);
  CHECK(sq.total_degree() == 2);
  CHECK((sq - sq).is_zero());
  CHECK((x * x * y).derivative(0) == x * y * Rational(2));
  const std::vector<Rational> pt{Rational(1, 2), Rational(3)};
  CHECK(sq.evaluate(pt) == Rational(49, 4));
  const auto rest = sq - x * x;
  for (const auto& [e, c] : rest.terms()) {
    CHECK(c != 0);
    CHECK(e.size() == 2);
  }
  CHECK(Polynomial(v).total_degree() == -1);
}

TEST_CASE("substitution is a ring homomorphism") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> v{"a", "b", "c"};
  for (int trial = 0; trial < 20; ++trial) {
    auto random_poly = [&] {
      Polynomial p(v);
      for (int t = 0; t < 4; ++t)
        p.add_term({static_cast<int>(rng() % 3), static_cast<int>(rng() % 3), static_cast<int>(rng() % 2)},
                   random_rational(rng) - 20);
      return p;
    };
    const auto p = random_poly(), q = random_poly();
    const std::map<std::string, Rational> at{{"b", random_rational(rng)}, {"c", random_rational(rng)}};
    CHECK((p * q).substitute(at) == p.substitute(at) * q.substitute(at));
    CHECK((p + q).substitute(at) == p.substitute(at) + q.substitute(at));
  }
}

TEST_CASE("cofactor and gaussian determinants agree with the leibniz formula") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
      std::vector<std::vector<Polynomial>> pm(n, std::vector<Polynomial>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          m[i][j] = rng() % 4 == 0 ? Rational(0) : random_rational(rng) - 25;
          pm[i][j] = Polynomial::constant({"t"}, m[i][j]);
        }
      const Rational want = leibniz(m);
      CHECK(determinant(m) == want);
      const auto sym = determinant(pm);
      CHECK(sym.evaluate(std::vector<Rational>{Rational(0)}) == want);
    }
}

TEST_CASE("cayley-menger matrix layout") {
  CayleyMengerMatrix v17(builtin_topology(TopologyId::V17));
  CHECK(v17.point_count() == 7);
  CHECK(v17.knowns().size() == 11);
  const std::vector<Edge> unknowns{{1, 5}, {1, 6}, {2, 4}, {2, 6}, {2, 7}, {3, 4}, {3, 5}, {3, 7}, {4, 5}, {6, 7}};
  CHECK(v17.unknowns() == unknowns);
  CHECK(v17.kind(0, 0) == CayleyMengerMatrix::Kind::Zero);
  CHECK(v17.kind(0, 3) == CayleyMengerMatrix::Kind::One);
  CHECK(v17.kind(4, 4) == CayleyMengerMatrix::Kind::Zero);
  CHECK(v17.kind(1, 2) == CayleyMengerMatrix::Kind::Known);
  CHECK(v17.kind(6, 7) == CayleyMengerMatrix::Kind::Unknown);
  CHECK(v17.kind(7, 6) == v17.kind(6, 7));
  CayleyMengerMatrix tri(triangle());
  CHECK(tri.unknowns().empty());
  CHECK(tri.knowns().size() == 3);
}

TEST_CASE("D(1,2,3) examples") {
  CayleyMengerMatrix tri(triangle());
  auto d123 = [&](Rational c12, Rational c13, Rational c23) {
    auto l = DistanceAssignment::from_squared({{Edge(1, 2), c12}, {Edge(1, 3), c13}, {Edge(2, 3), c23}});
    return constant_of(minor_polynomial(tri, {1, 2, 3}, &l));
  };
  CHECK(d123(9, 16, 25) == -576);
  CHECK(d123(1, 1, 2) == -4);
  // collinear points
  CHECK(d123(1, 4, 1) == 0);
}

TEST_CASE("D(1,2,3) product formula on 100 random rational triangles") {
  std::mt19937_64 rng(3);
  CayleyMengerMatrix tri(triangle());
  for (int trial = 0; trial < 100; ++trial) {
    const Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    auto l = DistanceAssignment::from_squared({{Edge(1, 2), a * a}, {Edge(1, 3), b * b}, {Edge(2, 3), c * c}});
    const Rational want = -(a + b + c) * (a + b - c) * (a + c - b) * (b + c - a);
    CHECK(constant_of(minor_polynomial(tri, {1, 2, 3}, &l)) == want);
  }
}

TEST_CASE("minor expansion commutes with substituting the knowns") {
  std::mt19937_64 rng(5);
  const auto g = builtin_topology(TopologyId::V17);
  CayleyMengerMatrix cm(g);
  for (int trial = 0; trial < 10; ++trial) {
    std::map<Edge, Rational> sq;
    std::map<std::string, Rational> named;
    for (const auto& e : g.edges()) {
      sq.emplace(e, random_rational(rng));
      named.emplace(known_name(e), sq.at(e));
    }
    const auto l = DistanceAssignment::from_squared(sq);
    for (const MinorIndex q : {MinorIndex{4, 5, 6, 7}, MinorIndex{1, 2, 3, 5}, MinorIndex{1, 3, 5, 6}}) {
      const std::vector<int> verts(q.begin(), q.end());
      const auto sym = minor_polynomial(cm, verts).substitute(named);
      const auto direct = minor_polynomial(cm, verts, &l);
      CHECK(sym.over(direct.variables()) == direct);
    }
  }
}

TEST_CASE("diagonal minors are invariant under simultaneous row and column permutation") {
  // Build the symbolic 5x5 bordered matrix by hand in a shuffled vertex order.
  const auto g = builtin_topology(TopologyId::V17);
  CayleyMengerMatrix cm(g);
  const std::vector<int> verts{1, 4, 6, 7};
  const auto ref = minor_polynomial(cm, verts);
  std::vector<int> order = verts;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    const auto& vars = ref.variables();
    auto entry = [&](int a, int b) {
      Edge e(a, b);
      const auto name = cm.is_known(e) ? known_name(e) : unknown_name(e);
      return Polynomial::variable(vars, std::find(vars.begin(), vars.end(), name) - vars.begin());
    };
    std::vector<std::vector<Polynomial>> m(5, std::vector<Polynomial>(5, Polynomial(vars)));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        if (i == j) continue;
        m[i][j] = (i == 0 || j == 0) ? Polynomial::constant(vars, 1) : entry(order[i - 1], order[j - 1]);
      }
    CHECK(determinant(m) == ref);
  }
}

TEST_CASE("canonical V17 system") {
  const auto s = canonical_system_v17();
  const std::vector<Edge> vars{{1, 5}, {1, 6}, {3, 5}, {4, 5}, {6, 7}};
  CHECK(s.variables == vars);
  CHECK(s.variable_names() == std::vector<std::string>{"x15", "x16", "x35", "x45", "x67"});
  const std::vector<MinorIndex> minors{{4, 5, 6, 7}, {1, 4, 6, 7}, {1, 4, 5, 7}, {1, 2, 3, 5}, {1, 3, 5, 6}};
  CHECK(s.minors == minors);
  REQUIRE(s.polynomials.size() == 5);
  std::vector<int> degrees;
  for (const auto& p : s.specialize(lengths_from_points(s.graph, {{0, 0}, {9, 1}, {3, 8}, {7, 7}, {12, 4}, {5, 11}, {2, 13}})))
    degrees.push_back(p.total_degree());
  CHECK(degrees == std::vector<int>{3, 2, 2, 2, 3});

  // D(1,3,5,6) involves exactly x15, x16, x35; D(4,5,6,7) only x45, x67; D(1,2,3,5) x15, x35
  auto unknowns_of = [&](std::size_t i) {
    std::vector<std::string> out;
    for (auto k : s.polynomials[i].occurring())
      if (k < 5) out.push_back(s.variable_names()[k]);
    return out;
  };
  CHECK(unknowns_of(4) == std::vector<std::string>{"x15", "x16", "x35"});
  CHECK(unknowns_of(0) == std::vector<std::string>{"x45", "x67"});
  CHECK(unknowns_of(3) == std::vector<std::string>{"x15", "x35"});
  CHECK(s.polynomials[0].split_leading(5).rbegin()->first.size() == 5);

  CHECK(s.placement_order == std::vector<int>{1, 2, 3, 5, 6, 4, 7});
  CHECK(finiteness_certificate(s, 1));
  CHECK(finiteness_certificate(s, 2));
}

TEST_CASE("every minor vanishes exactly at an embedding") {
  std::mt19937_64 rng(21);
  const auto s = canonical_system_v17();
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_points(rng, 7);
    const auto sys = s.specialize(lengths_from_points(s.graph, pts));
    std::vector<Rational> x;
    for (const auto& e : s.variables) x.push_back(sqdist(pts[e.u - 1], pts[e.v - 1]));
    for (const auto& p : sys) CHECK(p.evaluate(x) == 0);
  }
}

TEST_CASE("make_minor_system validation") {
  const auto g = builtin_topology(TopologyId::V17);
  // x24 appears in D(1,2,3,4) but is not a variable
  CHECK_THROWS_AS(make_minor_system(g, {{1, 5}}, {MinorIndex{1, 2, 3, 4}}), std::invalid_argument);
  // a bar is not an unknown
  CHECK_THROWS_AS(make_minor_system(g, {{1, 2}}, {MinorIndex{1, 2, 3, 5}}), std::invalid_argument);
  // x16 is never covered
  CHECK_THROWS_AS(make_minor_system(g, {{1, 5}, {3, 5}, {1, 6}}, {MinorIndex{1, 2, 3, 5}}), std::invalid_argument);
}

TEST_CASE("certificate rejects a covering system whose embeddings are not isolated") {
  // Covers its variables exactly and admits a trilateration order, but the
  // Jacobian is singular at every embedding.
  const auto s = make_minor_system(builtin_topology(TopologyId::V17), {{1, 5}, {2, 4}, {2, 7}, {3, 4}, {3, 7}},
                                   {MinorIndex{1, 2, 3, 4}, MinorIndex{1, 2, 3, 7}, MinorIndex{1, 2, 4, 7},
                                    MinorIndex{1, 2, 5, 7}, MinorIndex{1, 3, 4, 7}});
  REQUIRE_FALSE(s.placement_order.empty());
  CHECK_FALSE(finiteness_certificate(s, 1));
  CHECK_FALSE(finiteness_certificate(s, 99));
}

TEST_CASE("trilateration order") {
  const auto g = builtin_topology(TopologyId::V17);
  CHECK(trilateration_order(7, g.edges()).empty());  // a bare Laman graph has no such order
  CHECK(trilateration_order(3, triangle().edges()) == std::vector<int>{1, 2, 3});
}

TEST_CASE("coordinate system") {
  std::mt19937_64 rng(2);
  const auto g = builtin_topology(TopologyId::V17);
  const auto pts = random_points(rng, 7);
  const auto cs = coordinate_system(g, lengths_from_points(g, pts));
  CHECK(cs.variables.size() == 10);
  CHECK(cs.equations.size() == 10);
  CHECK(bezout_bound(cs.equations) == 1024);

  const auto one = Rational(1);
  const auto tri = coordinate_system(triangle(), DistanceAssignment::from_squared(
                                                     {{Edge(1, 2), one}, {Edge(1, 3), one}, {Edge(2, 3), one}}));
  CHECK(tri.equations.size() == 2);
  CHECK(tri.variables == std::vector<std::string>{"u3", "v3"});

  CHECK_THROWS_AS(coordinate_system(LinkageGraph(3, {{1, 3}, {2, 3}}),
                                    DistanceAssignment::from_squared({{Edge(1, 3), one}, {Edge(2, 3), one}})),
                  std::invalid_argument);
}

TEST_CASE("distance assignments") {
  CHECK_THROWS_AS(DistanceAssignment::from_lengths({{Edge(1, 2), 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(DistanceAssignment::from_lengths({{Edge(1, 2), -3.0}}), std::invalid_argument);
  const auto l = DistanceAssignment::from_lengths({{Edge(1, 2), 3.0}, {Edge(1, 3), 0.5}});
  CHECK(l.squared(Edge(1, 2)) == 9);
  CHECK(l.squared(Edge(1, 3)) == Rational(1, 4));
  CHECK(l.scaled(2).squared(Edge(1, 2)) == 36);
  CHECK_THROWS_AS(l.check_covers(triangle()), std::invalid_argument);
  CHECK(DistanceAssignment::from_squared({{Edge(1, 2), Rational(2)}}).length(Edge(1, 2)) ==
        doctest::Approx(std::sqrt(2.0)));
}
