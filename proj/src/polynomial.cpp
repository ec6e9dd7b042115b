#include "jorbit/polynomial.hpp"

#include <sstream>

#include "jorbit/errors.hpp"

namespace jorbit {

Polynomial Polynomial::constant(int nvars, Rational value) {
  Polynomial p(nvars);
  p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), value);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw Error(ErrorKind::out_of_range, "variable index out of range");
  Polynomial p(nvars);
  Exponents e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(index)] = 1;
  p.add_term(e, Rational(1));
  return p;
}

int Polynomial::total_degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    deg = std::max(deg, s);
  }
  return deg;
}

void Polynomial::add_term(const Exponents& exps, Rational coeff) {
  if (static_cast<int>(exps.size()) != nvars_) throw Error(ErrorKind::shape_mismatch, "exponent vector length");
  if (coeff.numerator() == 0) return;
  auto [it, inserted] = terms_.try_emplace(exps, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.numerator() == 0) terms_.erase(it);
  }
}

Rational Polynomial::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::check_same(const Polynomial& other) const {
  if (other.nvars_ != nvars_) throw Error(ErrorKind::shape_mismatch, "polynomials in different variable sets");
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s) {
  if (s.numerator() == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  Polynomial out(a.nvars_);
  Polynomial::Exponents e(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result = constant(nvars_, Rational(1));
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(int index) const {
  if (index < 0 || index >= nvars_) throw Error(ErrorKind::out_of_range, "variable index out of range");
  const auto i = static_cast<std::size_t>(index);
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents d = e;
    d[i] -= 1;
    out.add_term(d, c * Rational(e[i]));
  }
  return out;
}

namespace {

template <class T>
T evaluate_terms(const std::map<Polynomial::Exponents, Rational>& terms, std::span<const T> x) {
  T acc{};
  for (const auto& [e, c] : terms) {
    T term = static_cast<double>(c.numerator()) / static_cast<double>(c.denominator());
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) term *= x[i];
    }
    acc += term;
  }
  return acc;
}

}  // namespace

double Polynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw Error(ErrorKind::shape_mismatch, "evaluation point length");
  return evaluate_terms(terms_, x);
}

std::complex<double> Polynomial::evaluate(std::span<const std::complex<double>> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw Error(ErrorKind::shape_mismatch, "evaluation point length");
  return evaluate_terms(terms_, x);
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool neg = c.numerator() < 0;
    Rational mag = neg ? -c : c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool any = false;
    std::ostringstream mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (any) mono << '*';
      any = true;
      mono << (i < names.size() ? names[i] : "x" + std::to_string(i));
      if (e[i] > 1) mono << '^' << e[i];
    }
    if (!any || mag != Rational(1)) {
      os << mag.numerator();
      if (mag.denominator() != 1) os << '/' << mag.denominator();
      if (any) os << '*';
    }
    os << mono.str();
  }
  return os.str();
}

bool proportional(const Polynomial& a, const Polynomial& b, Rational& q) {
  if (b.is_zero()) return false;
  const auto& [e0, c0] = *b.terms().begin();
  q = a.coefficient(e0) / c0;
  return a == q * b;
}

}  // namespace jorbit
