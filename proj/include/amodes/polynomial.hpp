#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "amodes/rational.hpp"

namespace amodes {

using Exponent = std::vector<int>;

/// Sparse multivariate polynomial with exact rational coefficients over a
/// named, ordered variable list. Zero coefficients are never stored.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> variables);

  static Polynomial constant(std::vector<std::string> variables, const Rational& c);
  static Polynomial variable(std::vector<std::string> variables, std::size_t index);

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t variable_count() const { return vars_.size(); }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Adds c * x^e. Removes the term if the result is zero.
  void add_term(const Exponent& e, const Rational& c);

  int total_degree() const;  // -1 for the zero polynomial
  int degree_in(std::size_t var) const;
  /// Indices of variables that occur with a positive exponent.
  std::vector<std::size_t> occurring() const;
  std::vector<Exponent> support() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  Rational evaluate(std::span<const Rational> point) const;
  std::complex<double> evaluate(std::span<const std::complex<double>> point) const;

  Polynomial derivative(std::size_t var) const;

  /// Replaces the named variables by rational values; the result keeps the
  /// remaining variables in their original order.
  Polynomial substitute(const std::map<std::string, Rational>& values) const;

  /// Re-expresses the polynomial over another variable list. Every variable
  /// that occurs must be present in `variables`.
  Polynomial over(const std::vector<std::string>& variables) const;

  /// Groups terms by the exponents of the first `k` variables; each value is
  /// the coefficient polynomial in the remaining variables.
  std::map<Exponent, Polynomial> split_leading(std::size_t k) const;

  /// Largest absolute coefficient as a double (0 for the zero polynomial).
  double max_abs_coefficient() const;

  std::string to_string() const;

 private:
  void check_same_vars(const Polynomial& o) const;

  std::vector<std::string> vars_;
  std::map<Exponent, Rational> terms_;
};

/// Determinant of a square matrix of polynomials (all over the same
/// variables) by Laplace expansion with memoized column-subset minors.
Polynomial determinant(const std::vector<std::vector<Polynomial>>& m);

/// Determinant of a rational matrix by Gaussian elimination.
Rational determinant(std::vector<std::vector<Rational>> m);

}  // namespace amodes
