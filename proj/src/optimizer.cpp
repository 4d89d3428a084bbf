#include "amodes/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace amodes {

std::string to_string(OptimizerMethod m) {
  switch (m) {
    case OptimizerMethod::Random: return "random";
    case OptimizerMethod::Sa: return "sa";
    case OptimizerMethod::Ce: return "ce";
  }
  return "?";
}

OptimizerMethod parse_method(const std::string& name) {
  if (name == "random") return OptimizerMethod::Random;
  if (name == "sa") return OptimizerMethod::Sa;
  if (name == "ce") return OptimizerMethod::Ce;
  throw std::invalid_argument("unknown method '" + name + "' (expected random, sa or ce)");
}

void OptimizerConfig::validate() const {
  if (budget <= 0) throw std::invalid_argument("budget must be positive");
  if (dimension <= 0) throw std::invalid_argument("dimension must be positive");
  if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (samples <= 0 || elite <= 0 || elite > samples)
    throw std::invalid_argument("need 0 < elite count <= sample count");
  auto check = [&](const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != dimension)
      throw std::invalid_argument(std::string(what) + " has the wrong dimension");
    for (double x : v)
      if (!(x >= 0)) throw std::invalid_argument(std::string(what) + " must be non-negative");
  };
  check(sa_sigma, "SA sigma");
  check(ce_sigma, "CE sigma");
  if (static_cast<int>(ce_mu.size()) != dimension) throw std::invalid_argument("CE mu has the wrong dimension");
  if (!(random_sigma >= 0) || !(sigma_floor >= 0)) throw std::invalid_argument("deviations must be non-negative");
  if (!(t0 > 0) || max_step <= 0) throw std::invalid_argument("SA needs T0 > 0 and maxStep > 0");
  if (fixed_value < 1 || sa_start < 1) throw std::invalid_argument("lengths must be >= 1");
}

nlohmann::json to_json(const OptimizerConfig& c) {
  return {{"method", to_string(c.method)},
          {"budget", c.budget},
          {"seed", c.seed},
          {"target", c.target},
          {"cache", c.cache},
          {"t0", c.t0},
          {"max_step", c.max_step},
          {"sa_sigma", c.sa_sigma},
          {"samples", c.samples},
          {"elite", c.elite},
          {"alpha", c.alpha},
          {"ce_mu", c.ce_mu},
          {"ce_sigma", c.ce_sigma},
          {"sigma_floor", c.sigma_floor},
          {"sigma_about_previous_mean", c.sigma_about_previous_mean},
          {"random_center", c.random_center},
          {"random_sigma", c.random_sigma},
          {"fixed_value", c.fixed_value},
          {"units", to_string(c.units)}};
}

nlohmann::json to_json(const OptimizerRun& r) {
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& p : r.trajectory)
    traj.push_back({{"evaluation", p.evaluation}, {"candidate", p.candidate}, {"value", p.value}});
  return {{"config", to_json(r.config)},
          {"best", r.best},
          {"best_value", r.best_value},
          {"evals_to_best", r.evals_to_best},
          {"evaluations", r.evaluations},
          {"wall_ms", r.wall_ms},
          {"trajectory", traj}};
}

Candidate gaussian_neighbour(const std::vector<double>& center, const std::vector<double>& sigma, Rng& rng) {
  if (center.size() != sigma.size()) throw std::invalid_argument("dimension mismatch");
  Candidate out(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    const double v = sigma[i] > 0 ? rng.normal(center[i], sigma[i]) : center[i];
    out[i] = std::max(1L, std::lround(v));
  }
  return out;
}

Candidate gaussian_neighbour(const Candidate& point, const std::vector<double>& sigma, Rng& rng) {
  return gaussian_neighbour(std::vector<double>(point.begin(), point.end()), sigma, rng);
}

bool sa_accept(int new_value, int value, double temperature, double u) {
  if (new_value > value) return true;
  if (!(temperature > 0)) return false;
  return u < std::exp((new_value - value) / temperature);
}

namespace {

// Budget accounting and memoization shared by the three methods.
class Evaluator {
 public:
  Evaluator(const OptimizerConfig& cfg, const Objective& f, OptimizerRun& run) : cfg_(cfg), f_(f), run_(run) {}

  bool exhausted() const { return run_.evaluations >= cfg_.budget; }
  bool done() const { return exhausted() || run_.best_value >= cfg_.target; }

  int operator()(const Candidate& c) {
    if (cfg_.cache)
      if (auto it = memo_.find(c); it != memo_.end()) return it->second;
    const int v = f_(c);
    ++run_.evaluations;
    run_.trajectory.push_back({run_.evaluations, c, v});
    if (v > run_.best_value) {
      run_.best_value = v;
      run_.best = c;
      run_.evals_to_best = run_.evaluations;
    }
    if (cfg_.cache) memo_.emplace(c, v);
    return v;
  }

 private:
  const OptimizerConfig& cfg_;
  const Objective& f_;
  OptimizerRun& run_;
  std::map<Candidate, int> memo_;
};

template <class Body>
OptimizerRun timed(const OptimizerConfig& cfg, Body body) {
  cfg.validate();
  OptimizerRun run;
  run.config = cfg;
  const auto start = std::chrono::steady_clock::now();
  body(run);
  run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace

OptimizerRun simulated_annealing(const OptimizerConfig& cfg, const Objective& objective) {
  return timed(cfg, [&](OptimizerRun& run) {
    Evaluator eval(cfg, objective, run);
    Candidate point(cfg.dimension, cfg.sa_start);
    int value = eval(point);
    double temperature = cfg.t0;
    for (int n = 1; n <= cfg.max_step && value < cfg.target && !eval.exhausted(); ++n) {
      // One stream per iteration keeps the run reproducible step by step.
      Rng rng(mix_seed(cfg.seed, 0x5341, n));
      const Candidate next = gaussian_neighbour(point, cfg.sa_sigma, rng);
      const int next_value = eval(next);
      const double u = rng.uniform01();
      if (sa_accept(next_value, value, temperature, u)) {
        point = next;
        value = next_value;
      }
      temperature = cfg.t0 * (1.0 - static_cast<double>(n) / cfg.max_step);
    }
  });
}

void ce_update(const std::vector<Candidate>& samples, const std::vector<int>& values, const OptimizerConfig& cfg,
               std::vector<double>& mu, std::vector<double>& sigma) {
  if (samples.size() != values.size() || static_cast<int>(samples.size()) < cfg.elite)
    throw std::invalid_argument("need at least the elite count of scored samples");
  const std::size_t d = mu.size();
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  // Largest value first; ties keep sampling order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> mu_new(d, 0), sigma_new(d, 0);
  for (int e = 0; e < cfg.elite; ++e)
    for (std::size_t k = 0; k < d; ++k) mu_new[k] += static_cast<double>(samples[order[e]][k]) / cfg.elite;
  for (int e = 0; e < cfg.elite; ++e)
    for (std::size_t k = 0; k < d; ++k) {
      const double dv = samples[order[e]][k] - (cfg.sigma_about_previous_mean ? mu[k] : mu_new[k]);
      sigma_new[k] += dv * dv / cfg.elite;
    }
  for (std::size_t k = 0; k < d; ++k) {
    mu[k] = cfg.alpha * mu_new[k] + (1 - cfg.alpha) * mu[k];
    sigma[k] = std::max(cfg.sigma_floor, cfg.alpha * std::sqrt(sigma_new[k]) + (1 - cfg.alpha) * sigma[k]);
  }
}

OptimizerRun cross_entropy(const OptimizerConfig& cfg, const Objective& objective) {
  return timed(cfg, [&](OptimizerRun& run) {
    Evaluator eval(cfg, objective, run);
    std::vector<double> mu = cfg.ce_mu, sigma = cfg.ce_sigma;
    for (int gen = 1; gen <= cfg.max_generations && !eval.done(); ++gen) {
      std::vector<Candidate> xs;
      for (int i = 0; i < cfg.samples; ++i) {
        Rng rng(mix_seed(cfg.seed, 0x4345 + static_cast<std::uint64_t>(gen), i));
        xs.push_back(gaussian_neighbour(mu, sigma, rng));
      }
      std::vector<std::pair<int, int>> scored;  // (value, sample index)
      for (int i = 0; i < cfg.samples; ++i) {
        if (eval.done()) break;
        scored.emplace_back(eval(xs[i]), i);
      }
      if (static_cast<int>(scored.size()) < cfg.samples) break;  // budget ran out mid-generation
      std::vector<int> values(cfg.samples);
      for (const auto& [v, i] : scored) values[i] = v;
      ce_update(xs, values, cfg, mu, sigma);
    }
  });
}

OptimizerRun random_search(const OptimizerConfig& cfg, const Objective& objective) {
  return timed(cfg, [&](OptimizerRun& run) {
    Evaluator eval(cfg, objective, run);
    const std::vector<double> center(cfg.dimension, cfg.random_center);
    const std::vector<double> sigma(cfg.dimension, cfg.random_sigma);
    // Bounded so a degenerate sigma cannot loop on cached candidates forever.
    const long max_draws = 100L * cfg.budget;
    for (long i = 0; i < max_draws && !eval.done(); ++i) {
      Rng rng(mix_seed(cfg.seed, 0x5253, static_cast<std::uint64_t>(i)));
      eval(gaussian_neighbour(center, sigma, rng));
    }
  });
}

OptimizerRun run_optimizer(const OptimizerConfig& cfg, const Objective& objective) {
  switch (cfg.method) {
    case OptimizerMethod::Random: return random_search(cfg, objective);
    case OptimizerMethod::Sa: return simulated_annealing(cfg, objective);
    case OptimizerMethod::Ce: return cross_entropy(cfg, objective);
  }
  throw std::invalid_argument("unknown method");
}

const std::vector<Edge>& v17_free_edges() {
  static const std::vector<Edge> edges{{1, 2}, {1, 3}, {1, 4}, {1, 7}, {2, 3},
                                       {2, 5}, {3, 6}, {4, 6}, {4, 7}, {5, 6}};
  return edges;
}

Edge v17_fixed_edge() { return {5, 7}; }

std::string to_string(LengthUnits u) { return u == LengthUnits::Squared ? "squared" : "plain"; }

LengthUnits parse_units(const std::string& name) {
  if (name == "squared") return LengthUnits::Squared;
  if (name == "plain") return LengthUnits::Plain;
  throw std::invalid_argument("unknown length units '" + name + "' (squared or plain)");
}

DistanceAssignment v17_lengths(const Candidate& free, long fixed_value, LengthUnits units) {
  const auto& edges = v17_free_edges();
  if (free.size() != edges.size()) throw std::invalid_argument("expected 10 free lengths");
  if (fixed_value < 1) throw std::invalid_argument("fixed length must be positive");
  auto entry = [units](long v) { return units == LengthUnits::Squared ? Rational(v) : Rational(v) * v; };
  std::map<Edge, Rational> sq;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (free[i] < 1) throw std::invalid_argument("length of edge " + edges[i].label() + " must be positive");
    sq.emplace(edges[i], entry(free[i]));
  }
  sq.emplace(v17_fixed_edge(), entry(fixed_value));
  return DistanceAssignment::from_squared(std::move(sq));
}

std::vector<long> published_length_vector() { return {180, 70, 200, 205, 210, 205, 80, 200, 70, 200, 100}; }

Objective assembly_objective(const TrackerConfig& tracker, std::uint64_t solver_seed, long fixed_value,
                             LengthUnits units) {
  return [tracker, solver_seed, fixed_value, units](const Candidate& c) {
    return count_assembly_N(TopologyId::V17, v17_lengths(c, fixed_value, units), tracker, solver_seed);
  };
}

std::string table_cell(const OptimizerRun& r) {
  return std::to_string(r.best_value) + " (" + std::to_string(r.evals_to_best) + ")";
}

std::string csv_header() { return "method,seed,best_N,evals_to_best,wall_ms,display"; }

std::string csv_row(const OptimizerRun& r) {
  std::ostringstream out;
  out << to_string(r.config.method) << ',' << r.config.seed << ',' << r.best_value << ',' << r.evals_to_best << ','
      << std::llround(r.wall_ms) << ",\"" << table_cell(r) << '"';
  return out.str();
}

}  // namespace amodes
