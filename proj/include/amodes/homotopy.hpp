#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amodes/distance_system.hpp"
#include "amodes/polynomial.hpp"

namespace amodes {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

struct TrackerConfig {
  double initial_step = 0.05;
  double min_step = 1e-10;
  double max_step = 0.1;
  double corrector_tolerance = 1e-12;
  double divergence_bound = 1e8;
  int max_corrector_iterations = 3;
  double refinement_tolerance = 1e-12;
  double endgame_t = 1.0 - 1e-6;
  double dedup_radius = 1e-6;     // relative
  double real_tolerance = 1e-8;
  int max_steps = 20000;          // per path
  int threads = 1;
  /// Random unit-modulus constant; drawn from the seed when empty.
  std::optional<Complex> gamma;

  void validate() const;  // throws std::invalid_argument
};

nlohmann::json to_json(const TrackerConfig& c);

/// Square system compiled to complex double coefficients for fast
/// evaluation of values and Jacobians.
class CompiledSystem {
 public:
  CompiledSystem() = default;
  explicit CompiledSystem(const std::vector<Polynomial>& system);
  /// Complex coefficients given directly: terms[i] = {(exponent, coeff)}.
  CompiledSystem(int variables, std::vector<std::vector<std::pair<Exponent, Complex>>> terms);

  int size() const { return n_; }
  const std::vector<int>& degrees() const { return degrees_; }

  void evaluate(const Complex* x, Complex* f) const;
  /// Values plus row-major Jacobian (n x n).
  void evaluate(const Complex* x, Complex* f, Complex* jac) const;
  /// Homogenized system in (x0, x1..xn): values and n x (n+1) Jacobian.
  void evaluate_homogeneous(const Complex* x, Complex* f, Complex* jac) const;
  /// |f_i(x)| divided by the largest |coefficient * monomial| in f_i, max over i.
  double scaled_residual(const Complex* x) const;

 private:
  struct Term {
    Complex coeff;
    std::array<std::int8_t, 16> exp{};  // index 0 is the homogenizing variable
  };
  // Sparse dot product against the monomial table.
  struct Entry {
    Complex coeff;
    int monomial;
  };
  int monomial_index(const std::array<std::int8_t, 16>& e);
  void build_tables();

  int n_ = 0;
  int max_degree_ = 0;
  std::vector<int> degrees_;
  std::vector<std::vector<Term>> terms_;
  // Homogeneous monomials: value[j] = value[parent[j]] * X[var[j]].
  std::vector<std::array<std::int8_t, 16>> monomials_;
  std::vector<int> parent_, var_;
  std::vector<std::vector<Entry>> values_;     // per equation
  std::vector<std::vector<Entry>> partials_;   // per (equation, variable), row-major n x (n+1)
};

enum class PathStatus { Finite, AtInfinity, Failed };

struct Solution {
  ComplexVector x;
  double residual = 0;       // scaled residual after refinement
  double condition = 0;      // estimate of the Jacobian condition number
  int multiplicity = 1;      // number of paths that reached it
  bool singular = false;
  bool real = false;
  bool real_positive = false;
  bool borderline = false;   // not real, but imaginary parts below 1e-5
};

struct PathStatistics {
  int tracked = 0;
  int finite = 0;
  int diverged = 0;
  int failed = 0;
  int unresolved = 0;   // endpoints that neither refine nor diverge
  int retracked = 0;    // paths tracked again after landing on a shared root
  long steps = 0;
};

struct SolutionSet {
  std::vector<Solution> solutions;
  std::vector<ComplexVector> unresolved;  // not reported as solutions
  PathStatistics paths;
  int real = 0;
  int real_positive = 0;
  int borderline = 0;
  int singular = 0;
  std::uint64_t seed = 0;
  Complex gamma;
  TrackerConfig config;
};

struct Classification {
  int real = 0;
  int real_positive = 0;
};

/// Total-degree homotopy from {x_i^{d_i} - r_i} with the gamma trick,
/// tracked in a random affine chart of projective space so that paths going
/// to infinity stay bounded. Endpoints are refined at t = 1, merged when
/// within the relative dedup radius, and classified with cfg.real_tolerance.
/// Throws std::runtime_error when every path fails.
SolutionSet solve_system(const CompiledSystem& system, const TrackerConfig& cfg, std::uint64_t seed);
SolutionSet solve_system(const std::vector<Polynomial>& system, const TrackerConfig& cfg,
                         std::uint64_t seed);

/// Real iff every |Im| < tol; positive iff additionally every Re > tol.
Classification classify_solutions(const SolutionSet& s, double tol);
Classification classify_point(const ComplexVector& x, double tol);

/// Keeps the supports of `system` (in its first k variables, the remaining
/// ones being parameters) and draws independent random complex coefficients.
CompiledSystem random_coefficient_system(const std::vector<Polynomial>& system, std::size_t k,
                                         std::uint64_t seed);

/// Number of finite solutions with every coordinate nonzero.
int toric_count(const SolutionSet& s, double zero_tol = 1e-8);

struct AssemblyCount {
  int n = 0;                // real positive solutions, 0 on failure
  bool ok = true;           // false when a failure forced n = 0
  std::string reason;
  DistanceAssignment scaled_lengths;  // lengths actually solved (rescaled)
  double scale = 1;         // squared-length divisor applied before solving
  SolutionSet solutions;
};

/// Solves the minor system of a topology for given lengths. The system is
/// homogeneous, so squared lengths are divided by their mean before solving;
/// solutions are reported in the rescaled units. On failed paths or doubtful
/// real positive endpoints (singular, merged, or unrefined but close to the
/// real positive orthant) the solve is repeated with a fresh gamma; a second
/// failure yields n = 0.
AssemblyCount count_assembly(const MinorSystem& system, const DistanceAssignment& lengths,
                             const TrackerConfig& cfg, std::uint64_t seed);
int count_assembly_N(TopologyId topology, const DistanceAssignment& lengths, const TrackerConfig& cfg,
                     std::uint64_t seed);

/// The minor system used for counting: canonical for V17, the minimum
/// mixed-volume selection for the other two topologies.
const MinorSystem& counting_system(TopologyId topology);

struct OracleCount {
  int complex = 0;
  int real = 0;
  int congruence_classes = 0;
  bool odd_real = false;    // flagged degenerate instance
  SolutionSet solutions;
};

/// Solves the point-coordinate system (one quadratic per non-pinned edge).
OracleCount oracle_coordinate_count(const LinkageGraph& g, const DistanceAssignment& lengths,
                                    const TrackerConfig& cfg, std::uint64_t seed);

nlohmann::json to_json(const SolutionSet& s, const std::vector<std::string>& variable_names);

}  // namespace amodes
