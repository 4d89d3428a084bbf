#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amodes/distance_system.hpp"
#include "amodes/homotopy.hpp"
#include "amodes/rng.hpp"

namespace amodes {

enum class OptimizerMethod { Random, Sa, Ce };

std::string to_string(OptimizerMethod m);
OptimizerMethod parse_method(const std::string& name);  // random | sa | ce

using Candidate = std::vector<long>;  // the free parameters l_0..l_9

// How a parameter l_i enters the distance matrix. Squared: l_i is the matrix
// entry itself, a squared distance. Plain: l_i is a bar length.
enum class LengthUnits { Squared, Plain };

std::string to_string(LengthUnits u);
LengthUnits parse_units(const std::string& name);  // squared | plain
using Objective = std::function<int(const Candidate&)>;

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::Ce;
  int budget = 600;            // distinct evaluations of the objective
  std::uint64_t seed = 1;
  int dimension = 10;
  int target = 56;             // early stop once reached
  bool cache = true;           // repeated candidates do not consume budget
  // simulated annealing
  double t0 = 4;
  int max_step = 1000;
  std::vector<double> sa_sigma = std::vector<double>(10, 10.0);
  long sa_start = 100;
  // cross entropy
  int samples = 20;
  int elite = 5;
  double alpha = 0.5;
  std::vector<double> ce_mu = std::vector<double>(10, 100.0);
  std::vector<double> ce_sigma = std::vector<double>(10, 100.0);
  double sigma_floor = 0.5;
  // Elite spread measured around the mean before this generation's update
  // (as the update is usually written); false measures it around the new
  // elite mean instead.
  bool sigma_about_previous_mean = true;
  int max_generations = 10000;
  // direct sampling
  double random_center = 100;
  double random_sigma = 100;
  // fixed slot l_10
  long fixed_value = 100;
  LengthUnits units = LengthUnits::Squared;

  void validate() const;  // throws std::invalid_argument
};

nlohmann::json to_json(const OptimizerConfig& c);

struct TrajectoryPoint {
  int evaluation = 0;   // 1-based count of distinct evaluations so far
  Candidate candidate;
  int value = 0;
};

struct OptimizerRun {
  OptimizerConfig config;
  std::vector<TrajectoryPoint> trajectory;  // one entry per distinct evaluation
  Candidate best;
  int best_value = -1;
  int evals_to_best = 0;
  int evaluations = 0;
  double wall_ms = 0;
};

nlohmann::json to_json(const OptimizerRun& r);

/// Each coordinate from a normal law centered on the old value, rounded to
/// the nearest integer and clamped to >= 1.
Candidate gaussian_neighbour(const Candidate& point, const std::vector<double>& sigma, Rng& rng);
/// Same with a real-valued center (the CE mean).
Candidate gaussian_neighbour(const std::vector<double>& center, const std::vector<double>& sigma, Rng& rng);

/// SA acceptance: always for improvements, otherwise when u < exp(delta / T).
bool sa_accept(int new_value, int value, double temperature, double u);

/// One CE parameter update: elite = the cfg.elite best samples, then
/// mu <- alpha mean + (1 - alpha) mu and sigma <- alpha sd + (1 - alpha) sigma,
/// with sd taken around the previous mu (or the elite mean, see config) and
/// sigma floored at cfg.sigma_floor.
void ce_update(const std::vector<Candidate>& samples, const std::vector<int>& values, const OptimizerConfig& cfg,
               std::vector<double>& mu, std::vector<double>& sigma);

OptimizerRun simulated_annealing(const OptimizerConfig& cfg, const Objective& objective);
OptimizerRun cross_entropy(const OptimizerConfig& cfg, const Objective& objective);
OptimizerRun random_search(const OptimizerConfig& cfg, const Objective& objective);
OptimizerRun run_optimizer(const OptimizerConfig& cfg, const Objective& objective);

/// Free edges l_0..l_9 in order (1,2),(1,3),(1,4),(1,7),(2,3),(2,5),(3,6),
/// (4,6),(4,7),(5,6); l_10 is on (5,7).
const std::vector<Edge>& v17_free_edges();
Edge v17_fixed_edge();
DistanceAssignment v17_lengths(const Candidate& free, long fixed_value = 100,
                               LengthUnits units = LengthUnits::Squared);
/// The published vector (180, 70, 200, 205, 210, 205, 80, 200, 70, 200, 100)
/// under the convention above.
std::vector<long> published_length_vector();

/// N for V17 lengths built from a candidate.
Objective assembly_objective(const TrackerConfig& tracker, std::uint64_t solver_seed, long fixed_value = 100,
                             LengthUnits units = LengthUnits::Squared);

/// Table row: "n (m)".
std::string table_cell(const OptimizerRun& r);
std::string csv_header();
std::string csv_row(const OptimizerRun& r);

}  // namespace amodes
