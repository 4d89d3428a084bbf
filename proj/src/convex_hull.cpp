#include "amodes/convex_hull.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <stdexcept>

namespace amodes {
namespace {

using i128 = __int128;

// Coordinates (after translation) at most this large keep every predicate of
// the 128-bit hull exact for dim <= 5.
constexpr std::int64_t kSmallCoordinate = std::int64_t{1} << 20;

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64));
  mpz_class lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFull));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}
const mpz_class& to_mpz(const mpz_class& v) { return v; }

int sign_of(i128 v) { return (v > 0) - (v < 0); }
int sign_of(const mpz_class& v) { return sgn(v); }

constexpr int kMaxDim = 5;

template <typename T>
using Vec = std::array<T, kMaxDim>;

// Determinant of the leading n x n block by Laplace expansion along rows,
// columns drawn from `cols` (bitmask). n <= 5.
template <typename T>
T small_det(const std::array<Vec<T>, kMaxDim>& m, int row, int n, unsigned cols) {
  if (row == n) return T(1);
  T acc(0);
  int s = 1;
  for (int c = 0; c < kMaxDim; ++c) {
    if (!(cols & (1u << c))) continue;
    if (sign_of(m[row][c]) != 0) {
      T sub = small_det(m, row + 1, n, cols & ~(1u << c));
      if (s > 0) acc += m[row][c] * sub; else acc -= m[row][c] * sub;
    }
    s = -s;
  }
  return acc;
}

// Row-echelon basis of difference vectors; reports rank and pivot columns.
struct AffineBasis {
  int rank = 0;
  std::vector<int> pivots;           // pivot column per basis row
  std::vector<std::size_t> witness;  // point indices that raised the rank (first is the origin)
};

AffineBasis affine_basis(const std::vector<LatticePoint>& pts, int dim) {
  AffineBasis ab;
  if (pts.empty()) {
    ab.rank = -1;
    return ab;
  }
  ab.witness.push_back(0);
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 1; i < pts.size() && ab.rank < dim; ++i) {
    std::vector<Rational> v(dim);
    for (int k = 0; k < dim; ++k) v[k] = Rational(static_cast<long>(pts[i][k] - pts[0][k]));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const int p = ab.pivots[r];
      if (v[p] == 0) continue;
      Rational f = v[p] / rows[r][p];
      for (int k = 0; k < dim; ++k) v[k] -= f * rows[r][k];
    }
    auto nz = std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
    if (nz == v.end()) continue;
    ab.pivots.push_back(static_cast<int>(nz - v.begin()));
    rows.push_back(std::move(v));
    ab.witness.push_back(i);
    ++ab.rank;
  }
  return ab;
}

template <typename T>
class Hull {
 public:
  struct Facet {
    std::array<int, kMaxDim> verts{};  // sorted point indices, first d used
    Vec<T> normal{};
    T offset{0};
    bool alive = true;
  };

  // `pts` must be full-dimensional; `simplex` holds d+1 affinely independent indices.
  Hull(const std::vector<LatticePoint>& pts, int dim, const std::vector<std::size_t>& simplex)
      : d_(dim) {
    if (d_ < 2 || d_ > kMaxDim) throw std::invalid_argument("hull dimension must be in [2, 5]");
    pts_.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int k = 0; k < d_; ++k) pts_[i][k] = from_int(pts[i][k]);
    for (auto& c : interior_) c = T(0);
    for (std::size_t s : simplex)
      for (int k = 0; k < d_; ++k) interior_[k] += pts_[s][k];
    {
      std::array<Vec<T>, kMaxDim> m{};
      for (std::size_t j = 1; j < simplex.size(); ++j)
        for (int k = 0; k < d_; ++k) m[j - 1][k] = pts_[simplex[j]][k] - pts_[simplex[0]][k];
      T v = small_det(m, 0, d_, (1u << d_) - 1);
      volume_ += sign_of(v) < 0 ? T(-v) : v;
    }
    for (std::size_t skip = 0; skip < simplex.size(); ++skip) {
      std::array<int, kMaxDim> f{};
      int c = 0;
      for (std::size_t j = 0; j < simplex.size(); ++j)
        if (j != skip) f[c++] = static_cast<int>(simplex[j]);
      add_facet(f);
    }
    std::vector<bool> used(pts_.size(), false);
    for (std::size_t s : simplex) used[s] = true;
    // Deterministic shuffle: far-apart points first keeps the facet count low.
    std::vector<int> order;
    for (std::size_t i = 0; i < pts_.size(); ++i)
      if (!used[i]) order.push_back(static_cast<int>(i));
    std::uint64_t state = 0x2545F4914F6CDD1Dull;
    for (std::size_t i = order.size(); i > 1; --i) {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      std::swap(order[i - 1], order[state % i]);
    }
    for (int i : order) insert(i);
  }

  const T& scaled_volume() const { return volume_; }  // d! * volume

  std::vector<int> vertices() const {
    std::map<int, std::vector<const Facet*>> incident;
    for (const Facet& f : facets_)
      if (f.alive)
        for (int k = 0; k < d_; ++k) incident[f.verts[k]].push_back(&f);
    std::vector<int> out;
    for (const auto& [v, fs] : incident)
      if (normal_rank(fs) == d_) out.push_back(v);
    return out;
  }

 private:
  static T from_int(std::int64_t c) {
    if constexpr (std::is_same_v<T, mpz_class>) return mpz_class(static_cast<long>(c));
    else return static_cast<T>(c);
  }

  T side(const Facet& f, const Vec<T>& p) const {
    T s(0);
    for (int k = 0; k < d_; ++k) s += f.normal[k] * p[k];
    return s - f.offset;
  }

  void add_facet(std::array<int, kMaxDim> verts) {
    std::sort(verts.begin(), verts.begin() + d_);
    Facet f;
    f.verts = verts;
    std::array<Vec<T>, kMaxDim> rows{};
    for (int j = 1; j < d_; ++j)
      for (int k = 0; k < d_; ++k) rows[j - 1][k] = pts_[verts[j]][k] - pts_[verts[0]][k];
    const unsigned all = (1u << d_) - 1;
    for (int i = 0; i < d_; ++i) {
      T c = small_det(rows, 0, d_ - 1, all & ~(1u << i));
      f.normal[i] = (i % 2 == 0) ? c : T(-c);
    }
    for (int k = 0; k < d_; ++k) f.offset += f.normal[k] * pts_[verts[0]][k];
    // Orient so the interior point lies strictly below the hyperplane.
    T at_interior(0);
    for (int k = 0; k < d_; ++k) at_interior += f.normal[k] * interior_[k];
    const T scaled_offset = f.offset * T(d_ + 1);
    if (at_interior > scaled_offset) {
      for (int k = 0; k < d_; ++k) f.normal[k] = -f.normal[k];
      f.offset = -f.offset;
    }
    facets_.push_back(std::move(f));
    ++alive_;
  }

  void insert(int p) {
    const auto& pt = pts_[p];
    visible_.clear();
    for (std::size_t i = 0; i < facets_.size(); ++i) {
      if (!facets_[i].alive) continue;
      T s = side(facets_[i], pt);
      if (sign_of(s) > 0) {
        visible_.push_back(i);
        volume_ += s;
      }
    }
    if (visible_.empty()) return;
    ridges_.clear();
    for (std::size_t i : visible_) {
      const auto& vs = facets_[i].verts;
      for (int skip = 0; skip < d_; ++skip) {
        std::array<int, kMaxDim> r{};
        r.fill(-1);
        int c = 0;
        for (int j = 0; j < d_; ++j)
          if (j != skip) r[c++] = vs[j];
        ridges_.push_back(r);
      }
      facets_[i].alive = false;
      --alive_;
    }
    std::sort(ridges_.begin(), ridges_.end());
    for (std::size_t i = 0; i < ridges_.size();) {
      std::size_t j = i + 1;
      while (j < ridges_.size() && ridges_[j] == ridges_[i]) ++j;
      if (j - i == 1) {
        std::array<int, kMaxDim> f = ridges_[i];
        f[d_ - 1] = p;
        add_facet(f);
      }
      i = j;
    }
    if (facets_.size() > 64 && alive_ * 2 < facets_.size()) {
      std::erase_if(facets_, [](const Facet& f) { return !f.alive; });
    }
  }

  int normal_rank(const std::vector<const Facet*>& fs) const {
    std::vector<std::vector<Rational>> rows;
    std::vector<int> pivots;
    std::vector<Vec<T>> seen;
    for (const Facet* f : fs) {
      if (std::find(seen.begin(), seen.end(), f->normal) != seen.end()) continue;
      seen.push_back(f->normal);
      std::vector<Rational> v(d_);
      for (int k = 0; k < d_; ++k) v[k] = Rational(to_mpz(f->normal[k]));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const int pc = pivots[r];
        if (v[pc] == 0) continue;
        Rational q = v[pc] / rows[r][pc];
        for (int k = 0; k < d_; ++k) v[k] -= q * rows[r][k];
      }
      auto nz = std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
      if (nz == v.end()) continue;
      pivots.push_back(static_cast<int>(nz - v.begin()));
      rows.push_back(std::move(v));
      if (static_cast<int>(rows.size()) == d_) break;
    }
    return static_cast<int>(rows.size());
  }

  int d_;
  std::vector<Vec<T>> pts_;
  Vec<T> interior_{};  // (d+1) * centroid of the initial simplex
  std::vector<Facet> facets_;
  std::size_t alive_ = 0;
  T volume_{0};
  std::vector<std::size_t> visible_;
  std::vector<std::array<int, kMaxDim>> ridges_;
};

std::vector<LatticePoint> dedupe(std::vector<LatticePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void check_dims(const std::vector<LatticePoint>& pts, int dim) {
  if (dim < 0) throw std::invalid_argument("negative dimension");
  for (const auto& p : pts)
    if (static_cast<int>(p.size()) != dim) throw std::invalid_argument("point dimension mismatch");
}

// Projects onto the pivot coordinates, translated so the minimum is zero.
std::vector<LatticePoint> project(const std::vector<LatticePoint>& pts, const std::vector<int>& coords) {
  std::vector<LatticePoint> out(pts.size(), LatticePoint(coords.size()));
  for (std::size_t k = 0; k < coords.size(); ++k) {
    std::int64_t lo = pts.front()[coords[k]];
    for (const auto& p : pts) lo = std::min(lo, p[coords[k]]);
    for (std::size_t i = 0; i < pts.size(); ++i) out[i][k] = pts[i][coords[k]] - lo;
  }
  return out;
}

bool coordinates_small(const std::vector<LatticePoint>& pts) {
  for (const auto& p : pts)
    for (auto c : p)
      if (c > kSmallCoordinate || c < -kSmallCoordinate) return false;
  return true;
}

Rational factorial(int d) {
  Rational f = 1;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

}  // namespace

int affine_dimension(const std::vector<LatticePoint>& points, int dim) {
  check_dims(points, dim);
  return affine_basis(dedupe(points), dim).rank;
}

Rational lattice_polytope_volume(const std::vector<LatticePoint>& points, int dim) {
  check_dims(points, dim);
  if (dim == 0) return points.empty() ? Rational(0) : Rational(1);
  auto pts = dedupe(points);
  AffineBasis ab = affine_basis(pts, dim);
  if (ab.rank < dim) return 0;
  std::vector<int> all(dim);
  std::iota(all.begin(), all.end(), 0);
  pts = project(pts, all);
  if (dim == 1) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
    return Rational(static_cast<long>((*hi)[0] - (*lo)[0]));
  }
  if (coordinates_small(pts)) {
    Hull<i128> h(pts, dim, ab.witness);
    return Rational(to_mpz(h.scaled_volume())) / factorial(dim);
  }
  Hull<mpz_class> h(pts, dim, ab.witness);
  return Rational(h.scaled_volume()) / factorial(dim);
}

Rational polytope_volume(const std::vector<std::vector<Rational>>& points, int dim) {
  mpz_class common = 1;
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dim) throw std::invalid_argument("point dimension mismatch");
    for (const auto& q : p) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), q.get_den_mpz_t());
  }
  std::vector<LatticePoint> scaled;
  scaled.reserve(points.size());
  for (const auto& p : points) {
    LatticePoint lp;
    for (const auto& q : p) {
      mpz_class v = q.get_num() * (common / q.get_den());
      if (!v.fits_slong_p()) throw std::overflow_error("coordinate too large");
      lp.push_back(v.get_si());
    }
    scaled.push_back(std::move(lp));
  }
  Rational vol = lattice_polytope_volume(scaled, dim);
  mpz_class denom = 1;
  for (int k = 0; k < dim; ++k) denom *= common;
  return vol / Rational(denom);
}

std::vector<LatticePoint> hull_vertices(const std::vector<LatticePoint>& points, int dim) {
  check_dims(points, dim);
  auto pts = dedupe(points);
  if (pts.size() <= 1) return pts;
  AffineBasis ab = affine_basis(pts, dim);
  const int r = ab.rank;
  if (r == 0) return {pts.front()};
  auto proj = project(pts, ab.pivots);
  std::vector<int> idx;
  if (r == 1) {
    auto [lo, hi] = std::minmax_element(proj.begin(), proj.end());
    idx = {static_cast<int>(lo - proj.begin()), static_cast<int>(hi - proj.begin())};
  } else if (coordinates_small(proj)) {
    idx = Hull<i128>(proj, r, ab.witness).vertices();
  } else {
    idx = Hull<mpz_class>(proj, r, ab.witness).vertices();
  }
  std::vector<LatticePoint> out;
  for (int i : idx) out.push_back(pts[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace amodes
