#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace jorbit {

using Rational = boost::rational<long long>;

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are keyed by exponent vectors; zero coefficients are never stored.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, Rational value);
  /// The monomial x_index.
  static Polynomial variable(int nvars, int index);

  int num_vars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  /// Adds `coeff * x^exps` to the polynomial.
  void add_term(const Exponents& exps, Rational coeff);
  Rational coefficient(const Exponents& exps) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial pow(unsigned exponent) const;
  /// d/dx_index.
  Polynomial derivative(int index) const;

  double evaluate(std::span<const double> x) const;
  std::complex<double> evaluate(std::span<const std::complex<double>> x) const;

  /// Human-readable form using the given variable names (x0, x1, ... by default).
  std::string to_string(std::span<const std::string> names = {}) const;

 private:
  void check_same(const Polynomial& other) const;

  int nvars_;
  std::map<Exponents, Rational> terms_;
};

/// True when a = q * b for a rational constant q (written to `q`).
bool proportional(const Polynomial& a, const Polynomial& b, Rational& q);

}  // namespace jorbit
