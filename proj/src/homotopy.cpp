#include "amodes/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "amodes/rng.hpp"

namespace amodes {

namespace {

constexpr int kMaxVars = 15;
using Mat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxVars + 1, kMaxVars + 1>;
using Vec = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, kMaxVars + 1, 1>;

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// |re| + |im| max norm; within a factor sqrt(2) of the modulus max norm.
double inf_norm(const Vec& v) {
  double m = 0;
  for (int i = 0; i < v.size(); ++i) m = std::max(m, abs1(v[i]));
  return m;
}

// Solves J x = b in place by partial pivoting; false on an exactly singular
// or non-finite pivot. Small systems only, so no blocking.
bool lu_solve(Mat& J, Vec& b) {
  const int n = static_cast<int>(J.rows());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = abs1(J(c, c));
    for (int r = c + 1; r < n; ++r)
      if (double v = abs1(J(r, c)); v > best) {
        best = v;
        piv = r;
      }
    if (!(best > 0) || !std::isfinite(best)) return false;
    if (piv != c) {
      J.row(c).swap(J.row(piv));
      std::swap(b[c], b[piv]);
    }
    const Complex inv = 1.0 / J(c, c);
    for (int r = c + 1; r < n; ++r) {
      const Complex f = J(r, c) * inv;
      if (f == Complex(0)) continue;
      for (int k = c + 1; k < n; ++k) J(r, k) -= f * J(c, k);
      b[r] -= f * b[c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    Complex s = b[r];
    for (int k = r + 1; k < n; ++k) s -= J(r, k) * b[k];
    b[r] = s / J(r, r);
  }
  return b.allFinite();
}

Complex random_unit(Rng& rng) {
  const double a = rng.uniform(0, 2 * std::numbers::pi);
  return {std::cos(a), std::sin(a)};
}

}  // namespace

void TrackerConfig::validate() const {
  if (!(min_step > 0 && min_step < initial_step && initial_step <= 0.1))
    throw std::invalid_argument("tracker steps must satisfy 0 < min step < initial step <= 0.1");
  if (!(max_step >= initial_step)) throw std::invalid_argument("max step below initial step");
  if (!(corrector_tolerance > 0 && refinement_tolerance > 0 && real_tolerance > 0 && dedup_radius > 0))
    throw std::invalid_argument("tolerances must be positive");
  if (!(divergence_bound > 1)) throw std::invalid_argument("divergence bound must exceed 1");
  if (max_corrector_iterations < 1) throw std::invalid_argument("need at least one corrector iteration");
  if (!(endgame_t > 0 && endgame_t < 1)) throw std::invalid_argument("endgame t must lie in (0, 1)");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
}

nlohmann::json to_json(const TrackerConfig& c) {
  nlohmann::json j{{"initial_step", c.initial_step},
                   {"min_step", c.min_step},
                   {"max_step", c.max_step},
                   {"corrector_tolerance", c.corrector_tolerance},
                   {"divergence_bound", c.divergence_bound},
                   {"max_corrector_iterations", c.max_corrector_iterations},
                   {"refinement_tolerance", c.refinement_tolerance},
                   {"endgame_t", c.endgame_t},
                   {"dedup_radius", c.dedup_radius},
                   {"real_tolerance", c.real_tolerance}};
  return j;
}

CompiledSystem::CompiledSystem(const std::vector<Polynomial>& system) {
  const int n = static_cast<int>(system.size());
  std::vector<std::vector<std::pair<Exponent, Complex>>> terms(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(system[i].variable_count()) != n)
      throw std::invalid_argument("system is not square");
    for (const auto& [e, c] : system[i].terms()) terms[i].emplace_back(e, Complex(c.get_d(), 0));
  }
  *this = CompiledSystem(n, std::move(terms));
}

CompiledSystem::CompiledSystem(int variables, std::vector<std::vector<std::pair<Exponent, Complex>>> terms)
    : n_(variables) {
  if (n_ < 1 || n_ > kMaxVars) throw std::invalid_argument("system size must be in 1..15");
  if (static_cast<int>(terms.size()) != n_) throw std::invalid_argument("system is not square");
  for (const auto& poly : terms) {
    std::vector<Term> out;
    int deg = -1;
    for (const auto& [e, c] : poly) {
      if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("exponent length mismatch");
      if (c == Complex(0, 0)) continue;
      Term t;
      t.coeff = c;
      int d = 0;
      for (int k = 0; k < n_; ++k) {
        if (e[k] < 0 || e[k] > 60) throw std::invalid_argument("exponent out of range");
        t.exp[k + 1] = static_cast<std::int8_t>(e[k]);
        d += e[k];
      }
      deg = std::max(deg, d);
      out.push_back(t);
    }
    if (out.empty()) throw std::invalid_argument("zero polynomial in system");
    for (auto& t : out) {
      int d = 0;
      for (int k = 1; k <= n_; ++k) d += t.exp[k];
      t.exp[0] = static_cast<std::int8_t>(deg - d);
    }
    degrees_.push_back(deg);
    max_degree_ = std::max(max_degree_, deg);
    terms_.push_back(std::move(out));
  }
  build_tables();
}

int CompiledSystem::monomial_index(const std::array<std::int8_t, 16>& e) {
  auto it = std::find(monomials_.begin(), monomials_.end(), e);
  if (it != monomials_.end()) return static_cast<int>(it - monomials_.begin());
  int k = 0;
  while (k < 16 && e[k] == 0) ++k;
  if (k == 16) {
    monomials_.push_back(e);
    parent_.push_back(-1);
    var_.push_back(-1);
    return static_cast<int>(monomials_.size()) - 1;
  }
  auto lower = e;
  --lower[k];
  const int p = monomial_index(lower);
  monomials_.push_back(e);
  parent_.push_back(p);
  var_.push_back(k);
  return static_cast<int>(monomials_.size()) - 1;
}

void CompiledSystem::build_tables() {
  monomial_index({});
  const int m = n_ + 1;
  values_.assign(n_, {});
  partials_.assign(static_cast<std::size_t>(n_) * m, {});
  auto add = [&](std::vector<Entry>& list, Complex c, int idx) {
    for (auto& en : list)
      if (en.monomial == idx) {
        en.coeff += c;
        return;
      }
    list.push_back({c, idx});
  };
  for (int i = 0; i < n_; ++i)
    for (const Term& t : terms_[i]) {
      add(values_[i], t.coeff, monomial_index(t.exp));
      for (int k = 0; k < m; ++k) {
        if (t.exp[k] == 0) continue;
        auto e = t.exp;
        --e[k];
        add(partials_[i * m + k], t.coeff * static_cast<double>(t.exp[k]), monomial_index(e));
      }
    }
  // monomial_index appends parents before children, so one forward pass
  // evaluates the table.
}

void CompiledSystem::evaluate(const Complex* x, Complex* f) const {
  Complex hx[kMaxVars + 1];
  hx[0] = 1;
  std::copy(x, x + n_, hx + 1);
  for (int i = 0; i < n_; ++i) {
    Complex s = 0;
    for (const Term& t : terms_[i]) {
      Complex m = t.coeff;
      for (int k = 1; k <= n_; ++k)
        for (int p = 0; p < t.exp[k]; ++p) m *= hx[k];
      s += m;
    }
    f[i] = s;
  }
}

void CompiledSystem::evaluate(const Complex* x, Complex* f, Complex* jac) const {
  Complex hx[kMaxVars + 1];
  Complex hf[kMaxVars];
  Complex hj[kMaxVars * (kMaxVars + 1)];
  hx[0] = 1;
  std::copy(x, x + n_, hx + 1);
  evaluate_homogeneous(hx, hf, hj);
  // With x0 = 1 the affine partials are the homogeneous ones in x1..xn.
  for (int i = 0; i < n_; ++i) {
    f[i] = hf[i];
    for (int k = 0; k < n_; ++k) jac[i * n_ + k] = hj[i * (n_ + 1) + k + 1];
  }
}

void CompiledSystem::evaluate_homogeneous(const Complex* x, Complex* f, Complex* jac) const {
  const int m = n_ + 1;
  const std::size_t count = monomials_.size();
  Complex stack_buf[512];
  std::vector<Complex> heap_buf;
  Complex* mon = stack_buf;
  if (count > 512) {
    heap_buf.resize(count);
    mon = heap_buf.data();
  }
  for (std::size_t j = 0; j < count; ++j) mon[j] = parent_[j] < 0 ? Complex(1) : mon[parent_[j]] * x[var_[j]];
  for (int i = 0; i < n_; ++i) {
    Complex s = 0;
    for (const Entry& en : values_[i]) s += en.coeff * mon[en.monomial];
    f[i] = s;
    for (int k = 0; k < m; ++k) {
      Complex d = 0;
      for (const Entry& en : partials_[i * m + k]) d += en.coeff * mon[en.monomial];
      jac[i * m + k] = d;
    }
  }
}

double CompiledSystem::scaled_residual(const Complex* x) const {
  double worst = 0;
  for (int i = 0; i < n_; ++i) {
    Complex s = 0;
    double scale = 0;
    for (const Term& t : terms_[i]) {
      Complex m = t.coeff;
      for (int k = 1; k <= n_; ++k)
        for (int p = 0; p < t.exp[k]; ++p) m *= x[k - 1];
      s += m;
      scale = std::max(scale, std::abs(m));
    }
    worst = std::max(worst, scale > 0 ? std::abs(s) / scale : std::abs(s));
  }
  return worst;
}

namespace {

// Projective homotopy H(X, t) = (1 - t) gamma G(X) + t F(X), plus the chart
// a . X = 1, with G_i = X_i^{d_i} - r_i X_0^{d_i}.
class Homotopy {
 public:
  Homotopy(const CompiledSystem& f, Complex gamma, std::vector<Complex> r, Vec chart)
      : f_(f), n_(f.size()), gamma_(gamma), r_(std::move(r)), chart_(std::move(chart)) {}

  int dim() const { return n_ + 1; }

  // Values H, Jacobian H_X and derivative H_t.
  void eval(const Vec& X, double t, Vec& H, Mat& J, Vec& Ht) const {
    const int m = n_ + 1;
    Complex ff[kMaxVars];
    Complex fj[kMaxVars * (kMaxVars + 1)];
    f_.evaluate_homogeneous(X.data(), ff, fj);
    H.resize(m);
    Ht.resize(m);
    J.setZero(m, m);
    const Complex a = (1.0 - t) * gamma_;
    for (int i = 0; i < n_; ++i) {
      const int d = f_.degrees()[i];
      const Complex xi = X[i + 1], x0 = X[0];
      Complex xid1 = 1, x0d1 = 1;
      for (int p = 0; p < d - 1; ++p) {
        xid1 *= xi;
        x0d1 *= x0;
      }
      const Complex g = xid1 * xi - r_[i] * x0d1 * x0;
      H[i] = a * g + t * ff[i];
      Ht[i] = ff[i] - gamma_ * g;
      for (int k = 0; k < m; ++k) J(i, k) = t * fj[i * m + k];
      J(i, i + 1) += a * static_cast<double>(d) * xid1;
      J(i, 0) -= a * r_[i] * static_cast<double>(d) * x0d1;
    }
    Complex c = -1;
    for (int k = 0; k < m; ++k) {
      c += chart_[k] * X[k];
      J(n_, k) = chart_[k];
    }
    H[n_] = c;
    Ht[n_] = 0;
  }

  // dX/dt = -H_X^{-1} H_t; false when the Jacobian is numerically singular.
  bool tangent(const Vec& X, double t, Vec& dX) const {
    Vec H, Ht;
    Mat J;
    eval(X, t, H, J, Ht);
    dX = -Ht;
    return lu_solve(J, dX);
  }

  // Newton at fixed t. Returns the norm of the last update (inf on failure).
  double newton(Vec& X, double t, int iters, double tol, int* used = nullptr) const {
    Vec H, Ht;
    Mat J;
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < iters; ++it) {
      eval(X, t, H, J, Ht);
      Vec dX = -H;
      if (!lu_solve(J, dX)) return std::numeric_limits<double>::infinity();
      X += dX;
      const double nrm = inf_norm(dX);
      // Divergent corrections are a failure even when more iterations remain.
      if (it > 0 && nrm > 2 * last) {
        last = nrm;
        break;
      }
      last = nrm;
      if (used) *used = it + 1;
      if (last <= tol * std::max(1.0, inf_norm(X))) break;
    }
    return last;
  }

 private:
  const CompiledSystem& f_;
  int n_;
  Complex gamma_;
  std::vector<Complex> r_;
  Vec chart_;
};

struct PathResult {
  PathStatus status = PathStatus::Failed;
  Vec X;  // projective endpoint
  long steps = 0;
  // |X0| / |X| at t = 1 - 100 (1 - endgame_t) and at the endpoint; a path
  // heading to infinity shows a clear drop between the two.
  double ratio_early = 0;
  double ratio_end = 0;
};

double chart_ratio(const Vec& X) { return std::abs(X[0]) / std::max(inf_norm(X), 1e-300); }

PathResult track_path(const Homotopy& h, Vec X, const TrackerConfig& cfg) {
  PathResult res;
  double t = 0;
  double step = cfg.initial_step;
  int successes = 0;
  const double tol = cfg.corrector_tolerance;
  Vec k1, k2, k3, k4;
  const double t_early = 1.0 - 100.0 * (1.0 - cfg.endgame_t);
  bool early_seen = t_early <= 0;
  while (t < cfg.endgame_t) {
    if (res.steps >= cfg.max_steps) return res;
    ++res.steps;
    const double target = early_seen ? cfg.endgame_t : t_early;
    const double hstep = std::min(step, target - t);
    bool ok = h.tangent(X, t, k1) && h.tangent(X + 0.5 * hstep * k1, t + 0.5 * hstep, k2) &&
              h.tangent(X + 0.5 * hstep * k2, t + 0.5 * hstep, k3) &&
              h.tangent(X + hstep * k3, t + hstep, k4);
    Vec Y;
    if (ok) {
      Y = X + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      // Accept when the last Newton update is below sqrt(tol): quadratic
      // convergence then puts the point within tol of the path.
      const double upd = h.newton(Y, t + hstep, cfg.max_corrector_iterations, tol);
      ok = Y.allFinite() && upd <= std::sqrt(tol) * std::max(1.0, inf_norm(Y));
      if (ok) {
        const double moved = inf_norm(Y - X);
        if (moved > 0.25 * std::max(1.0, inf_norm(X))) ok = false;
      }
    }
    if (ok) {
      X = Y;
      t += hstep;
      if (!early_seen && t >= t_early) {
        early_seen = true;
        t = t_early;
        res.ratio_early = chart_ratio(X);
      }
      if (++successes >= 3) {
        step = std::min(step * 2, cfg.max_step);
        successes = 0;
      }
    } else {
      successes = 0;
      step *= 0.5;
      if (step < cfg.min_step) return res;
    }
  }
  res.X = X;
  res.ratio_end = chart_ratio(X);
  res.status = PathStatus::Finite;
  return res;
}

struct Endpoint {
  enum Kind { Failed, Diverged, Unresolved, Finite } kind = Failed;
  ComplexVector x;
  double residual = 0;
  double condition = 0;
};

// Refines a tracked endpoint at t = 1 and decides what it is.
Endpoint finish_path(const Homotopy& h, const CompiledSystem& system, const PathResult& pr,
                     const TrackerConfig& cfg) {
  Endpoint out;
  if (pr.status == PathStatus::Failed) return out;
  const int n = system.size();
  Vec X = pr.X;
  h.newton(X, 1.0, 3, cfg.corrector_tolerance);
  const double xnorm = inf_norm(X);
  out.kind = Endpoint::Diverged;
  if (!X.allFinite() || std::abs(X[0]) * cfg.divergence_bound < xnorm) return out;
  Vec x(n);
  for (int k = 0; k < n; ++k) x[k] = X[k + 1] / X[0];
  const Vec x_end = x;
  Complex fv[kMaxVars], jv[kMaxVars * kMaxVars];
  // Affine Newton polish. Near-singular endpoints converge slowly, so iterate
  // until the update reaches rounding level or stops shrinking.
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50; ++it) {
    system.evaluate(x.data(), fv, jv);
    Mat J(n, n);
    Vec F(n);
    for (int i = 0; i < n; ++i) {
      F[i] = fv[i];
      for (int k = 0; k < n; ++k) J(i, k) = jv[i * n + k];
    }
    Vec dx = -F;
    if (!lu_solve(J, dx)) break;
    const double nrm = inf_norm(dx);
    if (nrm > prev && nrm < 1e-8 * std::max(1.0, inf_norm(x))) break;
    x += dx;
    if (nrm <= 1e-15 * std::max(1.0, inf_norm(x))) break;
    prev = nrm;
  }
  if (!x.allFinite() || inf_norm(x) > cfg.divergence_bound) return out;
  // A polish that travels far started outside the root's basin, typically
  // on a path still heading to infinity; keep the tracked endpoint then.
  const bool far = inf_norm(x - x_end) > 0.05 * std::max(1.0, inf_norm(x_end));
  if (far) x = x_end;
  out.x.assign(x.data(), x.data() + n);
  out.residual = system.scaled_residual(x.data());
  if (far || !(out.residual < cfg.refinement_tolerance)) {
    // Not refinable. A shrinking homogenizing coordinate means the path is
    // on its way to infinity; otherwise it ends at a singular point.
    out.kind = pr.ratio_end < 0.5 * pr.ratio_early ? Endpoint::Diverged : Endpoint::Unresolved;
    return out;
  }
  system.evaluate(x.data(), fv, jv);
  Mat J(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) J(i, k) = jv[i * n + k];
  Eigen::JacobiSVD<Mat> svd(J);
  const auto& sv = svd.singularValues();
  out.condition = sv[n - 1] > 0 ? sv[0] / sv[n - 1] : std::numeric_limits<double>::infinity();
  out.kind = Endpoint::Finite;
  return out;
}

// Groups finite endpoints within the relative radius, in canonical order.
std::vector<std::vector<std::size_t>> cluster_endpoints(const std::vector<Endpoint>& ends, double radius) {
  std::vector<std::size_t> idx;
  for (std::size_t p = 0; p < ends.size(); ++p)
    if (ends[p].kind == Endpoint::Finite) idx.push_back(p);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    const auto& a = ends[i].x;
    const auto& b = ends[j].x;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
      if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
    }
    return i < j;
  });
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> used(idx.size(), false);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (used[i]) continue;
    const auto& x = ends[idx[i]].x;
    double scale = 0;
    for (auto& c : x) scale = std::max(scale, std::abs(c));
    std::vector<std::size_t> group{idx[i]};
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (used[j]) continue;
      double d = 0;
      for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - ends[idx[j]].x[k]));
      if (d <= radius * std::max(1.0, scale)) {
        used[j] = true;
        group.push_back(idx[j]);
      }
    }
    out.push_back(std::move(group));
  }
  return out;
}

}  // namespace

SolutionSet solve_system(const CompiledSystem& system, const TrackerConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int n = system.size();
  Rng rng(mix_seed(seed, 0x686f6d6f));
  SolutionSet out;
  out.seed = seed;
  out.config = cfg;
  out.gamma = cfg.gamma ? *cfg.gamma : random_unit(rng);
  std::vector<Complex> r(n);
  for (auto& v : r) v = random_unit(rng);
  Vec chart(n + 1);
  for (int k = 0; k <= n; ++k) chart[k] = Complex(rng.normal(), rng.normal());
  Homotopy h(system, out.gamma, r, chart);

  // Start points: products of d_i-th roots of r_i.
  long total = 1;
  for (int d : system.degrees()) {
    if (d < 1) throw std::invalid_argument("constant equation in system");
    total *= d;
    if (total > 1'000'000) throw std::invalid_argument("too many homotopy paths");
  }
  std::vector<Vec> starts;
  starts.reserve(total);
  std::vector<int> idx(n, 0);
  for (long p = 0; p < total; ++p) {
    Vec X(n + 1);
    X[0] = 1;
    for (int i = 0; i < n; ++i) {
      const int d = system.degrees()[i];
      const double arg = (std::arg(r[i]) + 2 * std::numbers::pi * idx[i]) / d;
      X[i + 1] = std::polar(1.0, arg);
    }
    Complex s = 0;
    for (int k = 0; k <= n; ++k) s += chart[k] * X[k];
    X /= s;
    starts.push_back(X);
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < system.degrees()[i]) break;
      idx[i] = 0;
    }
  }

  std::vector<PathResult> results(starts.size());
  auto track_all = [&](const std::vector<std::size_t>& which, const TrackerConfig& c) {
    auto work = [&](std::size_t begin, std::size_t stride) {
      for (std::size_t p = begin; p < which.size(); p += stride)
        results[which[p]] = track_path(h, starts[which[p]], c);
    };
    const int threads = std::min<int>(c.threads, static_cast<int>(which.size()));
    if (threads <= 1) {
      work(0, 1);
    } else {
      std::vector<std::jthread> pool;
      for (int i = 0; i < threads; ++i) pool.emplace_back(work, i, threads);
    }
  };
  std::vector<std::size_t> all(starts.size());
  std::iota(all.begin(), all.end(), 0);
  track_all(all, cfg);

  std::vector<Endpoint> ends(starts.size());
  for (std::size_t p = 0; p < starts.size(); ++p) ends[p] = finish_path(h, system, results[p], cfg);

  // Distinct paths of a total-degree homotopy never share a nonsingular
  // endpoint, so such a cluster means a path jumped. Retrack its members
  // with smaller steps.
  TrackerConfig tight = cfg;
  auto clusters = cluster_endpoints(ends, cfg.dedup_radius);
  for (int round = 0; round < 2; ++round) {
    std::vector<std::size_t> redo;
    for (const auto& c : clusters)
      if (c.size() > 1 && ends[c.front()].condition < 1e8) redo.insert(redo.end(), c.begin(), c.end());
    if (redo.empty()) break;
    tight.max_step /= 4;
    tight.initial_step = std::max(tight.initial_step / 4, 2 * tight.min_step);
    tight.max_steps *= 4;
    track_all(redo, tight);
    for (std::size_t p : redo) ends[p] = finish_path(h, system, results[p], cfg);
    clusters = cluster_endpoints(ends, cfg.dedup_radius);
    out.paths.retracked += static_cast<int>(redo.size());
  }

  out.paths.tracked = static_cast<int>(results.size());
  for (std::size_t p = 0; p < starts.size(); ++p) {
    out.paths.steps += results[p].steps;
    switch (ends[p].kind) {
      case Endpoint::Failed: ++out.paths.failed; break;
      case Endpoint::Diverged: ++out.paths.diverged; break;
      case Endpoint::Unresolved:
        ++out.paths.unresolved;
        out.unresolved.push_back(ends[p].x);
        break;
      case Endpoint::Finite: break;
    }
  }
  for (const auto& c : clusters) {
    const Endpoint& e = ends[c.front()];
    Solution s;
    s.x = e.x;
    s.residual = e.residual;
    s.condition = e.condition;
    s.multiplicity = static_cast<int>(c.size());
    s.singular = s.multiplicity > 1 || !(s.condition < 1e12);
    const Classification cl = classify_point(s.x, cfg.real_tolerance);
    s.real = cl.real > 0;
    s.real_positive = cl.real_positive > 0;
    if (!s.real) {
      double im = 0;
      for (auto& v : s.x) im = std::max(im, std::abs(v.imag()));
      s.borderline = im < 1e-5;
    }
    out.solutions.push_back(std::move(s));
  }
  out.paths.finite = 0;
  for (const auto& s : out.solutions) {
    out.paths.finite += s.multiplicity;
    out.real += s.real;
    out.real_positive += s.real_positive;
    out.borderline += s.borderline;
    out.singular += s.singular;
  }
  if (out.paths.failed == out.paths.tracked)
    throw std::runtime_error("all homotopy paths failed");
  return out;
}

SolutionSet solve_system(const std::vector<Polynomial>& system, const TrackerConfig& cfg, std::uint64_t seed) {
  return solve_system(CompiledSystem(system), cfg, seed);
}

Classification classify_point(const ComplexVector& x, double tol) {
  Classification c;
  bool real = true, positive = true;
  for (const auto& v : x) {
    if (!(std::abs(v.imag()) < tol)) real = false;
    if (!(v.real() > tol)) positive = false;
  }
  c.real = real;
  c.real_positive = real && positive;
  return c;
}

Classification classify_solutions(const SolutionSet& s, double tol) {
  Classification total;
  for (const auto& sol : s.solutions) {
    const Classification c = classify_point(sol.x, tol);
    total.real += c.real;
    total.real_positive += c.real_positive;
  }
  return total;
}

CompiledSystem random_coefficient_system(const std::vector<Polynomial>& system, std::size_t k,
                                         std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x72616e64));
  std::vector<std::vector<std::pair<Exponent, Complex>>> terms;
  for (const auto& p : system) {
    std::vector<std::pair<Exponent, Complex>> row;
    for (const auto& [head, coeff] : p.split_leading(k))
      row.emplace_back(head, Complex(rng.normal(), rng.normal()));
    terms.push_back(std::move(row));
  }
  return CompiledSystem(static_cast<int>(k), std::move(terms));
}

int toric_count(const SolutionSet& s, double zero_tol) {
  int count = 0;
  for (const auto& sol : s.solutions) {
    double scale = 0;
    for (auto& v : sol.x) scale = std::max(scale, std::abs(v));
    bool toric = true;
    for (auto& v : sol.x)
      if (std::abs(v) <= zero_tol * std::max(1.0, scale)) toric = false;
    if (toric) count += sol.multiplicity;
  }
  return count;
}

const MinorSystem& counting_system(TopologyId topology) {
  static const MinorSystem v17 = canonical_system_v17();
  // Minimum mixed-volume selections (48 each) found by select_minor_system.
  static const MinorSystem v37 = [] {
    MinorSystem s = make_minor_system(builtin_topology(TopologyId::V37), {{1, 6}, {1, 7}, {2, 6}, {2, 7}, {6, 7}},
                                      {MinorIndex{1, 2, 3, 6}, MinorIndex{1, 2, 3, 7}, MinorIndex{1, 3, 6, 7},
                                       MinorIndex{1, 4, 6, 7}, MinorIndex{2, 5, 6, 7}});
    s.topology = TopologyId::V37;
    return s;
  }();
  static const MinorSystem v67 = [] {
    MinorSystem s = make_minor_system(builtin_topology(TopologyId::V67), {{1, 5}, {1, 6}, {1, 7}, {2, 4}, {2, 6}},
                                      {MinorIndex{1, 2, 3, 6}, MinorIndex{1, 2, 4, 6}, MinorIndex{1, 2, 5, 6},
                                       MinorIndex{1, 4, 6, 7}, MinorIndex{1, 5, 6, 7}});
    s.topology = TopologyId::V67;
    return s;
  }();
  switch (topology) {
    case TopologyId::V17: return v17;
    case TopologyId::V37: return v37;
    case TopologyId::V67: return v67;
  }
  throw std::invalid_argument("unknown topology");
}

AssemblyCount count_assembly(const MinorSystem& system, const DistanceAssignment& lengths,
                             const TrackerConfig& cfg, std::uint64_t seed) {
  lengths.check_covers(system.graph);
  AssemblyCount out;
  Rational mean = 0;
  for (const Edge& e : system.graph.edges()) mean += lengths.squared(e);
  mean /= static_cast<long>(system.graph.edge_count());
  std::map<Edge, Rational> scaled;
  for (const Edge& e : system.graph.edges()) scaled.emplace(e, lengths.squared(e) / mean);
  out.scaled_lengths = DistanceAssignment::from_squared(std::move(scaled));
  out.scale = mean.get_d();
  const CompiledSystem compiled(system.specialize(out.scaled_lengths));

  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      out.solutions = solve_system(compiled, cfg, mix_seed(seed, attempt));
    } catch (const std::runtime_error& e) {
      out.reason = e.what();
      continue;
    }
    const auto& s = out.solutions;
    if (s.paths.failed > 0) {
      out.reason = std::to_string(s.paths.failed) + " path(s) failed";
      continue;
    }
    bool singular_positive = false;
    for (const auto& sol : s.solutions)
      if (sol.singular && sol.real_positive) singular_positive = true;
    if (singular_positive) {
      out.reason = "singular or merged real positive solution";
      continue;
    }
    bool unresolved_positive = false;
    for (const auto& x : s.unresolved) {
      double scale = 1, im = 0, re = std::numeric_limits<double>::infinity();
      for (const auto& v : x) {
        scale = std::max(scale, std::abs(v));
        im = std::max(im, std::abs(v.imag()));
        re = std::min(re, v.real());
      }
      if (im <= 1e-4 * scale && re > 0) unresolved_positive = true;
    }
    if (unresolved_positive) {
      out.reason = "unrefined endpoint near the real positive orthant";
      continue;
    }
    out.ok = true;
    out.reason.clear();
    out.n = s.real_positive;
    return out;
  }
  out.ok = false;
  out.n = 0;
  return out;
}

int count_assembly_N(TopologyId topology, const DistanceAssignment& lengths, const TrackerConfig& cfg,
                     std::uint64_t seed) {
  return count_assembly(counting_system(topology), lengths, cfg, seed).n;
}

OracleCount oracle_coordinate_count(const LinkageGraph& g, const DistanceAssignment& lengths,
                                    const TrackerConfig& cfg, std::uint64_t seed) {
  const CoordinateSystem cs = coordinate_system(g, lengths);
  OracleCount out;
  out.solutions = solve_system(cs.equations, cfg, seed);
  for (const auto& s : out.solutions.solutions) {
    out.complex += s.multiplicity;
    out.real += s.real ? s.multiplicity : 0;
  }
  out.odd_real = out.real % 2 != 0;
  out.congruence_classes = out.real / 2;
  return out;
}

nlohmann::json to_json(const SolutionSet& s, const std::vector<std::string>& variable_names) {
  nlohmann::json sols = nlohmann::json::array();
  for (const auto& sol : s.solutions) {
    nlohmann::json coords = nlohmann::json::array();
    for (std::size_t k = 0; k < sol.x.size(); ++k)
      coords.push_back({{"name", k < variable_names.size() ? variable_names[k] : "x" + std::to_string(k)},
                        {"re", sol.x[k].real()},
                        {"im", sol.x[k].imag()}});
    sols.push_back({{"coordinates", coords},
                    {"residual", sol.residual},
                    {"condition", sol.condition},
                    {"multiplicity", sol.multiplicity},
                    {"singular", sol.singular},
                    {"real", sol.real},
                    {"real_positive", sol.real_positive},
                    {"borderline", sol.borderline}});
  }
  return {{"solutions", sols},
          {"paths",
           {{"tracked", s.paths.tracked},
            {"finite", s.paths.finite},
            {"diverged", s.paths.diverged},
            {"failed", s.paths.failed},
            {"unresolved", s.paths.unresolved},
            {"retracked", s.paths.retracked},
            {"steps", s.paths.steps}}},
          {"counts",
           {{"finite", s.solutions.size()},
            {"real", s.real},
            {"real_positive", s.real_positive},
            {"borderline", s.borderline},
            {"singular", s.singular}}},
          {"metadata",
           {{"seed", s.seed},
            {"gamma", {{"re", s.gamma.real()}, {"im", s.gamma.imag()}}},
            {"config", to_json(s.config)}}}};
}

}  // namespace amodes
