#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "amodes/distance_system.hpp"

namespace amodes {

using Point2 = std::array<double, 2>;

struct Embedding {
  LinkageGraph graph;
  std::vector<Point2> points;   // index v - 1 for vertex v
  int orientation = 1;          // sign of the base-triangle determinant
  double max_residual = 0;      // max relative edge-length error
  bool non_generic = false;     // both trilateration branches matched
};

struct Infeasible {
  std::string reason;
};

using Realization = std::variant<Embedding, Infeasible>;

/// One placement: `vertex` from the circles around refs[0], refs[1], with
/// refs[2] selecting the branch.
struct PlacementStep {
  int vertex = 0;
  std::array<int, 3> refs{};
};

struct ReconstructionPlan {
  std::array<int, 3> base{};
  std::vector<PlacementStep> steps;
};

/// Plan for the system's variables: the placement order certified during
/// selection, references chosen among placed vertices preferring bar edges.
/// For the canonical V17 system this is 1,2,3 then 5 from {1,2,3}, 6 from
/// {1,3,5}, 4 from {1,5,6}, 7 from {1,4,5}.
ReconstructionPlan reconstruction_plan(const MinorSystem& s);

/// Trilaterates the vertices from bar lengths and a real positive solution
/// (squared distances for s.variables, in the same units as `lengths`).
/// Distances not used for placement (x67 for V17) are checked at the end.
/// Throws std::invalid_argument for a degenerate base triangle.
Realization reconstruct_embedding(const MinorSystem& s, const DistanceAssignment& lengths,
                                  const std::vector<double>& solution);

/// Distance matrix sign and rank conditions for planar point sets.
struct CayleyMengerReport {
  int rank = 0;
  bool rank_ok = false;          // rank == 4 (d + 2 for d = 2)
  bool signs_ok = false;         // D(i,j) >= 0, D(i,j,k) <= 0
  double max_minor_4 = 0;        // largest |D| on 4 points, scaled
  double max_minor_5 = 0;        // largest |D| on 5 points, scaled
  bool vanishing_ok = false;     // both below the tolerance
  std::vector<double> singular_values;
};

/// Numeric bordered distance matrix of the points, checked for rank 4, the
/// sign conditions on 2 and 3 points and vanishing of the 4- and 5-point
/// diagonal minors. Minors are scaled by (max squared distance)^(k-1).
CayleyMengerReport verify_cayley_menger(const std::vector<Point2>& points, double tol = 1e-9);

/// D(0, i1..ik) of a numeric bordered distance matrix (vertex indices 1-based).
double bordered_minor(const std::vector<Point2>& points, const std::vector<int>& verts);

Embedding mirrored(const Embedding& e);

struct SvgOptions {
  bool mirror = false;   // follow every embedding by its reflection
  int cell = 220;        // cell size in px
  int columns = 0;       // 0: ceil(sqrt(count))
  std::string title;
};

/// Deterministic SVG 1.1 grid, one cell per embedding.
std::string export_svg(const std::vector<Embedding>& embeddings, const SvgOptions& opts = {});

nlohmann::json to_json(const Embedding& e);

}  // namespace amodes
