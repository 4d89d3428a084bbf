#include "amodes/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace amodes {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  const auto slash = s.find('/');
  auto digits_ok = [](std::string_view part) {
    if (!part.empty() && (part.front() == '-' || part.front() == '+')) part.remove_prefix(1);
    return !part.empty() && std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!digits_ok(std::string_view(s).substr(0, slash))) throw bad();
  if (slash != std::string::npos) {
    std::string_view den = std::string_view(s).substr(slash + 1);
    if (!digits_ok(den) || den.front() == '-' || den.front() == '+') throw bad();
  }
  if (s.front() == '+') s.erase(0, 1);
  Rational q(s);
  if (q.get_den() == 0) throw bad();
  q.canonicalize();
  return q;
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  return Rational(x);
}

Polynomial::Polynomial(std::vector<std::string> variables) : vars_(std::move(variables)) {}

Polynomial Polynomial::constant(std::vector<std::string> variables, const Rational& c) {
  Polynomial p(std::move(variables));
  p.add_term(Exponent(p.vars_.size(), 0), c);
  return p;
}

Polynomial Polynomial::variable(std::vector<std::string> variables, std::size_t index) {
  Polynomial p(std::move(variables));
  if (index >= p.vars_.size()) throw std::out_of_range("variable index");
  Exponent e(p.vars_.size(), 0);
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != vars_.size()) throw std::invalid_argument("exponent length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

int Polynomial::degree_in(std::size_t var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
  return d;
}

std::vector<std::size_t> Polynomial::occurring() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (degree_in(i) > 0) out.push_back(i);
  return out;
}

std::vector<Exponent> Polynomial::support() const {
  std::vector<Exponent> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.push_back(e);
  return out;
}

void Polynomial::check_same_vars(const Polynomial& o) const {
  if (vars_ != o.vars_) throw std::invalid_argument("polynomials over different variables");
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same_vars(b);
  Polynomial r(a.vars_);
  Exponent e(a.vars_.size());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

namespace {

template <typename T>
T power(const T& base, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != vars_.size()) throw std::invalid_argument("point dimension mismatch");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t *= power(point[i], e[i]);
    sum += t;
  }
  return sum;
}

std::complex<double> Polynomial::evaluate(std::span<const std::complex<double>> point) const {
  if (point.size() != vars_.size()) throw std::invalid_argument("point dimension mismatch");
  std::complex<double> sum = 0;
  for (const auto& [e, c] : terms_) {
    std::complex<double> t = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t *= power(point[i], e[i]);
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= vars_.size()) throw std::out_of_range("variable index");
  Polynomial r(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    --d[var];
    r.add_term(d, c * e[var]);
  }
  return r;
}

Polynomial Polynomial::substitute(const std::map<std::string, Rational>& values) const {
  std::vector<std::string> keep;
  std::vector<std::size_t> keep_idx;
  std::vector<std::pair<std::size_t, Rational>> fixed;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = values.find(vars_[i]);
    if (it == values.end()) {
      keep.push_back(vars_[i]);
      keep_idx.push_back(i);
    } else {
      fixed.emplace_back(i, it->second);
    }
  }
  Polynomial r(keep);
  Exponent e(keep.size());
  for (const auto& [ex, c] : terms_) {
    Rational t = c;
    for (const auto& [i, v] : fixed)
      if (ex[i]) t *= power(v, ex[i]);
    for (std::size_t k = 0; k < keep_idx.size(); ++k) e[k] = ex[keep_idx[k]];
    r.add_term(e, t);
  }
  return r;
}

Polynomial Polynomial::over(const std::vector<std::string>& variables) const {
  std::vector<std::ptrdiff_t> target(vars_.size(), -1);
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(variables.begin(), variables.end(), vars_[i]);
    if (it != variables.end()) target[i] = it - variables.begin();
  }
  Polynomial r(variables);
  for (const auto& [ex, c] : terms_) {
    Exponent e(variables.size(), 0);
    for (std::size_t i = 0; i < ex.size(); ++i) {
      if (!ex[i]) continue;
      if (target[i] < 0) throw std::invalid_argument("variable " + vars_[i] + " missing from target list");
      e[target[i]] += ex[i];
    }
    r.add_term(e, c);
  }
  return r;
}

std::map<Exponent, Polynomial> Polynomial::split_leading(std::size_t k) const {
  if (k > vars_.size()) throw std::out_of_range("split index");
  std::vector<std::string> rest(vars_.begin() + k, vars_.end());
  std::map<Exponent, Polynomial> out;
  for (const auto& [ex, c] : terms_) {
    Exponent head(ex.begin(), ex.begin() + k);
    Exponent tail(ex.begin() + k, ex.end());
    auto [it, inserted] = out.try_emplace(head, rest);
    it->second.add_term(tail, c);
  }
  return out;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c.get_d()));
  return m;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    bool unit = mag == 1;
    bool any_var = std::any_of(e.begin(), e.end(), [](int k) { return k > 0; });
    if (!unit || !any_var) os << mag.get_str();
    bool need_star = !unit || !any_var;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (need_star) os << '*';
      os << vars_[i];
      if (e[i] > 1) os << '^' << e[i];
      need_star = true;
    }
    first = false;
  }
  return os.str();
}

Polynomial determinant(const std::vector<std::vector<Polynomial>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("empty matrix");
  if (n > 20) throw std::invalid_argument("matrix too large for Laplace expansion");
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
  const auto& vars = m[0][0].variables();
  std::unordered_map<unsigned, Polynomial> memo;
  // det of rows [n - |mask|, n) restricted to the columns in mask
  auto minor = [&](auto&& self, unsigned mask) -> Polynomial {
    if (mask == 0) return Polynomial::constant(vars, 1);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const std::size_t row = n - std::popcount(mask);
    Polynomial acc(vars);
    int sign = 1;
    for (std::size_t col = 0; col < n; ++col) {
      if (!(mask & (1u << col))) continue;
      if (!m[row][col].is_zero()) {
        Polynomial term = m[row][col] * self(self, mask & ~(1u << col));
        if (sign > 0) acc += term; else acc -= term;
      }
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return minor(minor, (1u << n) - 1);
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      Rational f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

}  // namespace amodes
