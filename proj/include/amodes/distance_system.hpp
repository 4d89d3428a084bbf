#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amodes/graph.hpp"
#include "amodes/polynomial.hpp"

namespace amodes {

/// Positive bar lengths per edge. Squared lengths are stored exactly so
/// irrational lengths such as sqrt(2) can be given through their squares.
class DistanceAssignment {
 public:
  DistanceAssignment() = default;

  static DistanceAssignment from_lengths(const std::map<Edge, double>& lengths);
  static DistanceAssignment from_squared(std::map<Edge, Rational> squared);

  const std::map<Edge, Rational>& squared() const { return squared_; }
  const Rational& squared(Edge e) const;
  double length(Edge e) const;
  bool contains(Edge e) const { return squared_.count(e) > 0; }
  std::size_t size() const { return squared_.size(); }

  /// Throws std::invalid_argument naming the first edge of g without a length.
  void check_covers(const LinkageGraph& g) const;

  /// Lengths multiplied by `factor` (squares by factor^2).
  DistanceAssignment scaled(const Rational& factor) const;

 private:
  std::map<Edge, Rational> squared_;
};

/// Symbolic bordered distance matrix: row/column 0 is the border of ones,
/// entry (i, j) for i != j >= 1 is the known squared length c_ij when (i, j)
/// is an edge and the unknown x_ij otherwise.
class CayleyMengerMatrix {
 public:
  enum class Kind { Zero, One, Known, Unknown };

  explicit CayleyMengerMatrix(const LinkageGraph& g);

  int point_count() const { return n_; }
  Kind kind(int i, int j) const;
  const std::vector<Edge>& knowns() const { return knowns_; }
  const std::vector<Edge>& unknowns() const { return unknowns_; }
  bool is_known(Edge e) const;

 private:
  int n_;
  std::vector<Edge> knowns_;
  std::vector<Edge> unknowns_;
};

std::string unknown_name(Edge e);  // "x15"
std::string known_name(Edge e);    // "c12"

/// Diagonal minor D(0, i1, ..., ik) of the matrix as an exact polynomial.
/// Variables: the unknowns among the chosen vertices (sorted), followed by
/// the knowns (sorted) when no lengths are given. With lengths, knowns are
/// replaced by the exact squared lengths.
Polynomial minor_polynomial(const CayleyMengerMatrix& m, const std::vector<int>& verts,
                            const DistanceAssignment* lengths = nullptr);

using MinorIndex = std::array<int, 4>;

/// Square system of diagonal 5x5 minors in a chosen set of unknown distances.
struct MinorSystem {
  LinkageGraph graph;
  std::optional<TopologyId> topology;
  std::vector<Edge> variables;   // unknown pairs, in system order
  std::vector<MinorIndex> minors;
  /// Expanded minors over [variable names..., known names...]; the leading
  /// block of variables is `variables`, the rest are the symbolic knowns.
  std::vector<Polynomial> polynomials;
  /// Vertex placement order certified by sequential trilateration: a base
  /// triangle, then vertices with at least three determined distances.
  std::vector<int> placement_order;

  std::vector<std::string> variable_names() const;
  /// Substitutes exact squared lengths; result is over `variable_names()`.
  std::vector<Polynomial> specialize(const DistanceAssignment& lengths) const;
};

/// Builds the system for given variables and minors (validates coverage).
MinorSystem make_minor_system(const LinkageGraph& g, std::vector<Edge> variables,
                              std::vector<MinorIndex> minors);

/// The 5x5 system used for the 11-bar linkage: variables x15, x16, x35, x45,
/// x67 and minors D(4,5,6,7), D(1,4,6,7), D(1,4,5,7), D(1,2,3,5), D(1,3,5,6).
MinorSystem canonical_system_v17();

/// Sequential trilateration order over the given edge set, or empty when none
/// exists. Tries every base triangle in lexicographic order.
std::vector<int> trilateration_order(int n, const std::vector<Edge>& edges);

struct RankedSystem {
  MinorSystem system;
  Integer mixed_volume;
};

struct SelectionOptions {
  std::uint64_t seed = 20100901;
  int certificate_attempts = 3;  // one sample plus two retries
};

/// Enumerates all (variable set, minor set) pairs of size k whose minors
/// cover exactly the variables, pass the Jacobian finiteness certificate and
/// admit a trilateration order. Sorted by mixed volume, then lexicographically.
/// Throws std::runtime_error when no candidate survives.
std::vector<RankedSystem> select_minor_system(const LinkageGraph& g, int k,
                                              const SelectionOptions& opts = {});

/// Probabilistic finiteness certificate. A random planar configuration with
/// integer coordinates in [1, 1e6] fixes the knowns and gives an exact
/// solution of the minors; the Jacobian with respect to the variables must be
/// nonsingular there, so embedding solutions are isolated. A singular sample
/// is retried with a fresh configuration.
bool finiteness_certificate(const MinorSystem& s, std::uint64_t seed, int attempts = 3);

/// Point-coordinate formulation: vertex 1 at the origin, vertex 2 on the
/// positive x axis, one quadratic per remaining edge. Coordinates are
/// expressed in units of l_12 so all coefficients stay rational; variables
/// are u3, v3, ..., un, vn.
struct CoordinateSystem {
  std::vector<std::string> variables;
  std::vector<Polynomial> equations;
  std::vector<Edge> equation_edges;
  double unit = 1.0;  // l_12
};

CoordinateSystem coordinate_system(const LinkageGraph& g, const DistanceAssignment& lengths);

nlohmann::json to_json(const MinorSystem& s);
nlohmann::json polynomial_to_json(const Polynomial& p);

}  // namespace amodes
