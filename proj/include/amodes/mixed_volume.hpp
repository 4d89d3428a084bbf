#pragma once

#include <map>
#include <span>
#include <vector>

#include "amodes/convex_hull.hpp"
#include "amodes/polynomial.hpp"

namespace amodes {

/// Convex hull of a polynomial's support.
struct NewtonPolytope {
  int dim = 0;
  std::vector<LatticePoint> points;    // support, sorted
  std::vector<LatticePoint> vertices;  // extreme points, sorted
};

/// Throws std::invalid_argument for the zero polynomial.
NewtonPolytope newton_polytope(const Polynomial& p);

/// Newton polytope with respect to the first `k` variables only: the other
/// variables are treated as generic coefficient parameters.
NewtonPolytope newton_polytope_leading(const Polynomial& p, std::size_t k);

NewtonPolytope polytope_from_points(std::vector<LatticePoint> points, int dim);

/// Vertices of A + B.
std::vector<LatticePoint> minkowski_sum(const std::vector<LatticePoint>& a,
                                        const std::vector<LatticePoint>& b, int dim);

struct MixedVolumeReport {
  Integer mv;
  /// Euclidean volume of the Minkowski sum for every non-empty subset, keyed
  /// by subset bitmask (bit i = polytope i).
  std::map<unsigned, Rational> subset_volumes;
};

/// Normalized (lattice) mixed volume of n polytopes in R^n by
/// inclusion-exclusion over all non-empty subsets. n <= 5 enforced.
MixedVolumeReport mixed_volume(std::span<const NewtonPolytope> polytopes);

/// Memoizes Minkowski-sum vertex sets and volumes across many mixed-volume
/// computations that share polytopes (used when enumerating candidate systems).
class MixedVolumeCache {
 public:
  explicit MixedVolumeCache(int dim) : dim_(dim) {}

  /// Registers a polytope; identical vertex sets share an id.
  int add(const NewtonPolytope& p);
  Integer mixed_volume(std::span<const int> ids);
  std::size_t cached_sums() const { return sums_.size(); }

 private:
  struct Sum {
    std::vector<LatticePoint> vertices;
    Rational volume;
  };
  const Sum& sum(const std::vector<int>& sorted_ids);

  int dim_;
  std::map<std::vector<LatticePoint>, int> ids_;
  std::vector<std::vector<LatticePoint>> polytopes_;
  std::map<std::vector<int>, Sum> sums_;
};

/// Product of total degrees.
Integer bezout_bound(std::span<const Polynomial> system);

}  // namespace amodes
