#pragma once

#include <cstdint>
#include <vector>

#include "amodes/rational.hpp"

namespace amodes {

using LatticePoint = std::vector<std::int64_t>;

/// Exact Euclidean volume of conv(points) in Z^dim. Zero when the hull is
/// lower-dimensional. Uses an incremental placing triangulation; predicates
/// run in 128-bit integers when coordinates are small and in GMP otherwise.
Rational lattice_polytope_volume(const std::vector<LatticePoint>& points, int dim);

/// Same for rational coordinates (scaled to a common denominator internally).
Rational polytope_volume(const std::vector<std::vector<Rational>>& points, int dim);

/// Extreme points of conv(points), sorted lexicographically, duplicates removed.
/// Works for lower-dimensional hulls.
std::vector<LatticePoint> hull_vertices(const std::vector<LatticePoint>& points, int dim);

/// Dimension of the affine hull of the points (-1 for an empty set).
int affine_dimension(const std::vector<LatticePoint>& points, int dim);

}  // namespace amodes
