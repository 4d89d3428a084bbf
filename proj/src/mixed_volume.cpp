#include "amodes/mixed_volume.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace amodes {

NewtonPolytope polytope_from_points(std::vector<LatticePoint> points, int dim) {
  if (points.empty()) throw std::invalid_argument("empty support");
  NewtonPolytope np;
  np.dim = dim;
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  np.vertices = hull_vertices(points, dim);
  np.points = std::move(points);
  return np;
}

NewtonPolytope newton_polytope(const Polynomial& p) {
  return newton_polytope_leading(p, p.variable_count());
}

NewtonPolytope newton_polytope_leading(const Polynomial& p, std::size_t k) {
  if (p.is_zero()) throw std::invalid_argument("Newton polytope of the zero polynomial");
  std::vector<LatticePoint> pts;
  for (const auto& [head, coeff] : p.split_leading(k)) pts.emplace_back(head.begin(), head.end());
  return polytope_from_points(std::move(pts), static_cast<int>(k));
}

std::vector<LatticePoint> minkowski_sum(const std::vector<LatticePoint>& a,
                                        const std::vector<LatticePoint>& b, int dim) {
  std::vector<LatticePoint> pts;
  pts.reserve(a.size() * b.size());
  for (const auto& p : a)
    for (const auto& q : b) {
      LatticePoint s(dim);
      for (int k = 0; k < dim; ++k) s[k] = p[k] + q[k];
      pts.push_back(std::move(s));
    }
  return hull_vertices(pts, dim);
}

int MixedVolumeCache::add(const NewtonPolytope& p) {
  if (p.dim != dim_) throw std::invalid_argument("polytope dimension mismatch");
  auto [it, inserted] = ids_.try_emplace(p.vertices, static_cast<int>(polytopes_.size()));
  if (inserted) polytopes_.push_back(p.vertices);
  return it->second;
}

const MixedVolumeCache::Sum& MixedVolumeCache::sum(const std::vector<int>& sorted_ids) {
  if (auto it = sums_.find(sorted_ids); it != sums_.end()) return it->second;
  Sum s;
  if (sorted_ids.size() == 1) {
    s.vertices = polytopes_.at(sorted_ids[0]);
  } else {
    std::vector<int> prefix(sorted_ids.begin(), sorted_ids.end() - 1);
    const auto& head = sum(prefix).vertices;
    s.vertices = minkowski_sum(head, polytopes_.at(sorted_ids.back()), dim_);
  }
  s.volume = lattice_polytope_volume(s.vertices, dim_);
  return sums_.emplace(sorted_ids, std::move(s)).first->second;
}

Integer MixedVolumeCache::mixed_volume(std::span<const int> ids) {
  const int n = static_cast<int>(ids.size());
  if (n != dim_) throw std::invalid_argument("mixed volume needs exactly dim polytopes");
  if (n > 5) throw std::invalid_argument("mixed volume limited to dimension 5");
  Rational total = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> sub;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(ids[i]);
    std::sort(sub.begin(), sub.end());
    const Rational& v = sum(sub).volume;
    if ((n - std::popcount(mask)) % 2 == 0) total += v; else total -= v;
  }
  if (total.get_den() != 1) throw std::logic_error("non-integral mixed volume of lattice polytopes");
  return total.get_num();
}

MixedVolumeReport mixed_volume(std::span<const NewtonPolytope> polytopes) {
  const int n = static_cast<int>(polytopes.size());
  if (n == 0) throw std::invalid_argument("no polytopes");
  if (n > 5) throw std::invalid_argument("mixed volume limited to dimension 5");
  for (const auto& p : polytopes)
    if (p.dim != n) throw std::invalid_argument("need n polytopes in R^n");
  MixedVolumeReport rep;
  Rational total = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<LatticePoint> acc;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      acc = acc.empty() ? polytopes[i].vertices : minkowski_sum(acc, polytopes[i].vertices, n);
    }
    Rational v = lattice_polytope_volume(acc, n);
    rep.subset_volumes.emplace(mask, v);
    if ((n - std::popcount(mask)) % 2 == 0) total += v; else total -= v;
  }
  if (total.get_den() != 1) throw std::logic_error("non-integral mixed volume of lattice polytopes");
  rep.mv = total.get_num();
  return rep;
}

Integer bezout_bound(std::span<const Polynomial> system) {
  Integer b = 1;
  for (const auto& p : system) {
    const int d = p.total_degree();
    if (d < 0) return 0;
    b *= d;
  }
  return b;
}

}  // namespace amodes
