#include "amodes/distance_system.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "amodes/mixed_volume.hpp"

namespace amodes {

DistanceAssignment DistanceAssignment::from_lengths(const std::map<Edge, double>& lengths) {
  std::map<Edge, Rational> sq;
  for (const auto& [e, l] : lengths) {
    if (!(l > 0) || !std::isfinite(l))
      throw std::invalid_argument("length of edge " + e.label() + " must be positive");
    Rational q = exact_rational(l);
    sq.emplace(e, q * q);
  }
  return from_squared(std::move(sq));
}

DistanceAssignment DistanceAssignment::from_squared(std::map<Edge, Rational> squared) {
  for (const auto& [e, c] : squared)
    if (c <= 0) throw std::invalid_argument("length of edge " + e.label() + " must be positive");
  DistanceAssignment d;
  d.squared_ = std::move(squared);
  return d;
}

const Rational& DistanceAssignment::squared(Edge e) const {
  auto it = squared_.find(e);
  if (it == squared_.end()) throw std::invalid_argument("no length for edge " + e.label());
  return it->second;
}

double DistanceAssignment::length(Edge e) const { return std::sqrt(squared(e).get_d()); }

void DistanceAssignment::check_covers(const LinkageGraph& g) const {
  for (const Edge& e : g.edges())
    if (!contains(e)) throw std::invalid_argument("missing length for edge " + e.label());
}

DistanceAssignment DistanceAssignment::scaled(const Rational& factor) const {
  if (factor <= 0) throw std::invalid_argument("scale factor must be positive");
  DistanceAssignment d;
  for (const auto& [e, c] : squared_) d.squared_.emplace(e, c * factor * factor);
  return d;
}

CayleyMengerMatrix::CayleyMengerMatrix(const LinkageGraph& g) : n_(g.vertex_count()) {
  knowns_ = g.edges();
  unknowns_ = g.non_edges();
}

bool CayleyMengerMatrix::is_known(Edge e) const {
  return std::binary_search(knowns_.begin(), knowns_.end(), e);
}

CayleyMengerMatrix::Kind CayleyMengerMatrix::kind(int i, int j) const {
  if (i < 0 || j < 0 || i > n_ || j > n_) throw std::out_of_range("matrix index");
  if (i == j) return Kind::Zero;
  if (i == 0 || j == 0) return Kind::One;
  return is_known(Edge(i, j)) ? Kind::Known : Kind::Unknown;
}

std::string unknown_name(Edge e) {
  return e.v < 10 ? "x" + std::to_string(e.u) + std::to_string(e.v)
                  : "x" + std::to_string(e.u) + "_" + std::to_string(e.v);
}

std::string known_name(Edge e) {
  return e.v < 10 ? "c" + std::to_string(e.u) + std::to_string(e.v)
                  : "c" + std::to_string(e.u) + "_" + std::to_string(e.v);
}

Polynomial minor_polynomial(const CayleyMengerMatrix& m, const std::vector<int>& verts,
                            const DistanceAssignment* lengths) {
  std::vector<int> vs = verts;
  std::sort(vs.begin(), vs.end());
  if (vs.empty()) throw std::invalid_argument("minor needs at least one vertex");
  if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
    throw std::invalid_argument("minor vertices must be distinct");
  for (int v : vs)
    if (v < 1 || v > m.point_count()) throw std::invalid_argument("minor vertex out of range");

  std::vector<std::string> unknowns, knowns;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      Edge e(vs[a], vs[b]);
      if (m.is_known(e)) knowns.push_back(known_name(e));
      else unknowns.push_back(unknown_name(e));
    }
  std::vector<std::string> vars = unknowns;
  if (!lengths) vars.insert(vars.end(), knowns.begin(), knowns.end());

  auto index_of = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), name) - vars.begin());
  };
  const std::size_t k = vs.size() + 1;
  std::vector<std::vector<Polynomial>> mat(k, std::vector<Polynomial>(k, Polynomial(vars)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (i == 0 || j == 0) {
        mat[i][j] = Polynomial::constant(vars, 1);
        continue;
      }
      Edge e(vs[i - 1], vs[j - 1]);
      if (!m.is_known(e)) mat[i][j] = Polynomial::variable(vars, index_of(unknown_name(e)));
      else if (lengths) mat[i][j] = Polynomial::constant(vars, lengths->squared(e));
      else mat[i][j] = Polynomial::variable(vars, index_of(known_name(e)));
    }
  return determinant(mat);
}

std::vector<std::string> MinorSystem::variable_names() const {
  std::vector<std::string> out;
  for (const Edge& e : variables) out.push_back(unknown_name(e));
  return out;
}

std::vector<Polynomial> MinorSystem::specialize(const DistanceAssignment& lengths) const {
  std::map<std::string, Rational> values;
  for (const Edge& e : graph.edges()) values.emplace(known_name(e), lengths.squared(e));
  std::vector<Polynomial> out;
  for (const auto& p : polynomials) out.push_back(p.substitute(values));
  return out;
}

MinorSystem make_minor_system(const LinkageGraph& g, std::vector<Edge> variables,
                              std::vector<MinorIndex> minors) {
  CayleyMengerMatrix cm(g);
  MinorSystem s;
  s.graph = g;
  s.variables = std::move(variables);
  s.minors = std::move(minors);
  for (const Edge& e : s.variables)
    if (cm.is_known(e)) throw std::invalid_argument("variable " + e.label() + " is a known edge");
  std::vector<std::string> all = s.variable_names();
  for (const Edge& e : g.edges()) all.push_back(known_name(e));
  std::vector<bool> covered(s.variables.size(), false);
  for (const MinorIndex& q : s.minors) {
    Polynomial p = minor_polynomial(cm, {q.begin(), q.end()});
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) {
        Edge e(q[a], q[b]);
        if (cm.is_known(e)) continue;
        auto it = std::find(s.variables.begin(), s.variables.end(), e);
        if (it == s.variables.end())
          throw std::invalid_argument("minor involves unknown " + e.label() + " outside the system");
        covered[it - s.variables.begin()] = true;
      }
    s.polynomials.push_back(p.over(all));
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end())
    throw std::invalid_argument("minors do not cover every variable");
  std::vector<Edge> aug = g.edges();
  aug.insert(aug.end(), s.variables.begin(), s.variables.end());
  s.placement_order = trilateration_order(g.vertex_count(), aug);
  return s;
}

MinorSystem canonical_system_v17() {
  MinorSystem s = make_minor_system(builtin_topology(TopologyId::V17),
                                    {{1, 5}, {1, 6}, {3, 5}, {4, 5}, {6, 7}},
                                    {MinorIndex{4, 5, 6, 7}, MinorIndex{1, 4, 6, 7}, MinorIndex{1, 4, 5, 7},
                                     MinorIndex{1, 2, 3, 5}, MinorIndex{1, 3, 5, 6}});
  s.topology = TopologyId::V17;
  return s;
}

std::vector<int> trilateration_order(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<bool>> adj(n + 1, std::vector<bool>(n + 1, false));
  for (const Edge& e : edges) adj[e.u][e.v] = adj[e.v][e.u] = true;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c) {
        if (!adj[a][b] || !adj[a][c] || !adj[b][c]) continue;
        std::vector<int> order{a, b, c};
        std::vector<bool> placed(n + 1, false);
        placed[a] = placed[b] = placed[c] = true;
        bool grew = true;
        while (grew && static_cast<int>(order.size()) < n) {
          grew = false;
          for (int w = 1; w <= n; ++w) {
            if (placed[w]) continue;
            int links = 0;
            for (int p : order) links += adj[w][p];
            if (links >= 3) {
              order.push_back(w);
              placed[w] = true;
              grew = true;
              break;
            }
          }
        }
        if (static_cast<int>(order.size()) == n) return order;
      }
  return {};
}

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Jacobian rows of specialized minors at a random sample.
struct CertificateSample {
  std::vector<std::vector<Rational>> rows;  // one row per minor polynomial
};

// Random planar configuration with integer coordinates in [1, 1e6]; knowns
// and unknowns take the exact squared distances, so the sample is a solution
// of every minor.
CertificateSample sample_gradients(const std::vector<Polynomial>& polys, const std::vector<Edge>& variables,
                                   const LinkageGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(1, 1000000);
  const int n = g.vertex_count();
  std::vector<std::array<Rational, 2>> pts(n + 1);
  for (int v = 1; v <= n; ++v) pts[v] = {Rational(pick(rng)), Rational(pick(rng))};
  auto sq = [&](Edge e) {
    Rational dx = pts[e.u][0] - pts[e.v][0], dy = pts[e.u][1] - pts[e.v][1];
    return Rational(dx * dx + dy * dy);
  };
  std::vector<Rational> point;
  for (const Edge& e : variables) point.push_back(sq(e));
  for (const Edge& e : g.edges()) point.push_back(sq(e));
  const std::size_t k = variables.size();
  CertificateSample s;
  for (const auto& p : polys) {
    if (p.evaluate(point) != 0) throw std::logic_error("minor does not vanish on a planar configuration");
    std::vector<Rational> row(k);
    for (std::size_t i = 0; i < k; ++i) row[i] = p.derivative(i).evaluate(point);
    s.rows.push_back(std::move(row));
  }
  return s;
}

}  // namespace

bool finiteness_certificate(const MinorSystem& s, std::uint64_t seed, int attempts) {
  const std::size_t k = s.variables.size();
  if (s.polynomials.size() != k) return false;
  for (int a = 0; a < attempts; ++a) {
    auto sample = sample_gradients(s.polynomials, s.variables, s.graph, mix_seed(seed, a));
    if (determinant(sample.rows) != 0) return true;
  }
  return false;
}

std::vector<RankedSystem> select_minor_system(const LinkageGraph& g, int k, const SelectionOptions& opts) {
  const int n = g.vertex_count();
  if (k < 1 || k > 5) throw std::invalid_argument("system size must be between 1 and 5");
  CayleyMengerMatrix cm(g);
  const auto& unknowns = cm.unknowns();
  const int u = static_cast<int>(unknowns.size());
  if (u > 30) throw std::invalid_argument("too many unknown distances to enumerate");

  struct Minor {
    MinorIndex verts;
    unsigned unknown_mask = 0;
  };
  std::vector<Minor> minors;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int d = c + 1; d <= n; ++d) {
          Minor m{{a, b, c, d}, 0};
          const int q[4] = {a, b, c, d};
          for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
              auto it = std::find(unknowns.begin(), unknowns.end(), Edge(q[i], q[j]));
              if (it != unknowns.end()) m.unknown_mask |= 1u << (it - unknowns.begin());
            }
          if (m.unknown_mask) minors.push_back(m);
        }

  std::vector<RankedSystem> out;
  for (unsigned vmask = 0; vmask < (1u << u); ++vmask) {
    if (std::popcount(vmask) != k) continue;
    std::vector<Edge> vars;
    for (int i = 0; i < u; ++i)
      if (vmask & (1u << i)) vars.push_back(unknowns[i]);
    std::vector<Edge> aug = g.edges();
    aug.insert(aug.end(), vars.begin(), vars.end());
    if (trilateration_order(n, aug).empty()) continue;

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < minors.size(); ++i)
      if ((minors[i].unknown_mask & ~vmask) == 0) pool.push_back(i);
    if (static_cast<int>(pool.size()) < k) continue;

    // Per-variable-set state: symbolic polynomials and cached samples.
    MinorSystem all = make_minor_system(g, vars, [&] {
      std::vector<MinorIndex> v;
      for (std::size_t i : pool) v.push_back(minors[i].verts);
      return v;
    }());
    std::vector<CertificateSample> samples;
    for (int a = 0; a < opts.certificate_attempts; ++a)
      samples.push_back(sample_gradients(all.polynomials, vars, g, mix_seed(opts.seed ^ vmask, a)));
    MixedVolumeCache cache(k);
    std::vector<int> poly_ids;
    for (const auto& p : all.polynomials) poly_ids.push_back(cache.add(newton_polytope_leading(p, k)));

    // k-combinations of the pool
    std::vector<int> choice(k);
    for (int i = 0; i < k; ++i) choice[i] = i;
    const int m = static_cast<int>(pool.size());
    while (true) {
      unsigned cover = 0;
      for (int c : choice) cover |= minors[pool[c]].unknown_mask;
      if (cover == vmask) {
        bool certified = false;
        for (const auto& s : samples) {
          std::vector<std::vector<Rational>> jac;
          for (int c : choice) jac.push_back(s.rows[c]);
          if (determinant(jac) != 0) {
            certified = true;
            break;
          }
        }
        if (certified) {
          std::vector<int> ids;
          for (int c : choice) ids.push_back(poly_ids[c]);
          RankedSystem r;
          r.mixed_volume = cache.mixed_volume(ids);
          r.system.graph = g;
          r.system.variables = vars;
          for (int c : choice) {
            r.system.minors.push_back(all.minors[c]);
            r.system.polynomials.push_back(all.polynomials[c]);
          }
          r.system.placement_order = all.placement_order;
          out.push_back(std::move(r));
        }
      }
      int i = k - 1;
      while (i >= 0 && choice[i] == m - k + i) --i;
      if (i < 0) break;
      ++choice[i];
      for (int j = i + 1; j < k; ++j) choice[j] = choice[j - 1] + 1;
    }
  }
  if (out.empty()) throw std::runtime_error("no certified minor system of size " + std::to_string(k));
  std::stable_sort(out.begin(), out.end(), [](const RankedSystem& a, const RankedSystem& b) {
    if (a.mixed_volume != b.mixed_volume) return a.mixed_volume < b.mixed_volume;
    if (a.system.variables != b.system.variables) return a.system.variables < b.system.variables;
    return a.system.minors < b.system.minors;
  });
  return out;
}

CoordinateSystem coordinate_system(const LinkageGraph& g, const DistanceAssignment& lengths) {
  if (!g.has_edge(1, 2)) throw std::invalid_argument("coordinate system needs edge (1,2); relabel the graph");
  lengths.check_covers(g);
  const int n = g.vertex_count();
  CoordinateSystem cs;
  for (int v = 3; v <= n; ++v) {
    cs.variables.push_back("u" + std::to_string(v));
    cs.variables.push_back("v" + std::to_string(v));
  }
  const Rational& c12 = lengths.squared(Edge(1, 2));
  cs.unit = std::sqrt(c12.get_d());
  // Coordinates of vertex i as polynomials: (0,0), (1,0), or (u_i, v_i).
  auto coord = [&](int vertex, int axis) {
    if (vertex == 1) return Polynomial(cs.variables);
    if (vertex == 2) return axis == 0 ? Polynomial::constant(cs.variables, 1) : Polynomial(cs.variables);
    return Polynomial::variable(cs.variables, 2 * (vertex - 3) + axis);
  };
  for (const Edge& e : g.edges()) {
    if (e == Edge(1, 2)) continue;
    Polynomial dx = coord(e.u, 0) - coord(e.v, 0);
    Polynomial dy = coord(e.u, 1) - coord(e.v, 1);
    Polynomial eq = dx * dx + dy * dy - Polynomial::constant(cs.variables, lengths.squared(e) / c12);
    cs.equations.push_back(std::move(eq));
    cs.equation_edges.push_back(e);
  }
  return cs;
}

nlohmann::json polynomial_to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exponents", e}, {"coeff", to_string(c)}});
  return {{"variables", p.variables()}, {"terms", terms}};
}

nlohmann::json to_json(const MinorSystem& s) {
  nlohmann::json j;
  j["graph"] = to_json(s.graph);
  if (s.topology) j["topology"] = to_string(*s.topology);
  j["variables"] = s.variable_names();
  j["minors"] = s.minors;
  nlohmann::json polys = nlohmann::json::array();
  for (const auto& p : s.polynomials) polys.push_back(polynomial_to_json(p));
  j["polynomials"] = polys;
  j["placement_order"] = s.placement_order;
  return j;
}

}  // namespace amodes
