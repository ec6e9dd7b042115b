#include <doctest.h>

#include <cmath>

#include "jorbit/cayley.hpp"
#include "jorbit/errors.hpp"

using namespace jorbit;

TEST_CASE("polynomial arithmetic") {
  const Polynomial x = Polynomial::variable(2, 0);
  const Polynomial y = Polynomial::variable(2, 1);
  const Polynomial p = (x + y).pow(3);
  CHECK(p.total_degree() == 3);
  CHECK(p.coefficient({2, 1}) == Rational(3));
  CHECK(p.derivative(0) == Rational(3) * (x + y).pow(2));
  CHECK((p - p).is_zero());
  const double at[] = {1.5, -0.5};
  CHECK(p.evaluate(at) == doctest::Approx(1.0));
  Rational q;
  CHECK(proportional(Rational(5, 2) * p, p, q));
  CHECK(q == Rational(5, 2));
  CHECK(!proportional(p + x, p, q));
}

TEST_CASE("symbol convention: det(d) exp<x, y> = det(y) exp<x, y> at order n") {
  CHECK(cayley_symbol_check(1));
  CHECK(cayley_symbol_check(2));
}

TEST_CASE("det(d) det(u) = 3/2") {
  const Polynomial d = cayley_operator(symmetric_det(2, 3), 2);
  CHECK(d == Polynomial::constant(3, Rational(3, 2)));
}

TEST_CASE("cayley constants are s(s + 1/2)") {
  for (unsigned s = 1; s <= 4; ++s) {
    const auto c = cayley_constant(2, s);
    REQUIRE(c.has_value());
    CHECK(*c == Rational(static_cast<long long>(s)) * (Rational(static_cast<long long>(s)) + Rational(1, 2)));
    CHECK(boost::rational_cast<double>(*c) == cayley_constant_predicted(2, s));
    const auto c1 = cayley_constant(1, s);
    REQUIRE(c1.has_value());
    CHECK(*c1 == Rational(static_cast<long long>(s)));
  }
  CHECK(*cayley_constant(2, 1) == Rational(3, 2));
}

TEST_CASE("finite differences agree with the symbolic operator") {
  const auto c = lookup_case("sp_c", 2);
  const Polynomial f = symmetric_det(2, 3).pow(3);
  CayleyFunction sym{f, {}};
  CayleyFunction num{std::nullopt, [f](std::span<const double> v) { return f.evaluate(v); }};
  CMatrix x(2, 2);
  x << 0.7, -0.3, -0.3, 1.2;
  const auto e = make_element(c, x);
  const auto a = cayley_operator_apply(c, sym, e, CayleyScheme::symbolic_polynomial);
  const auto b = cayley_operator_apply(c, num, e, CayleyScheme::finite_difference);
  CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
  CHECK_THROWS_AS(cayley_operator_apply(c, num, e, CayleyScheme::symbolic_polynomial), Error);
  CHECK_THROWS_AS(cayley_operator_apply(lookup_case("sp_c", 3), sym, zero_element(lookup_case("sp_c", 3)),
                                        CayleyScheme::symbolic_polynomial),
                  Error);
  CHECK(parse_cayley_scheme("fd") == CayleyScheme::finite_difference);
}

TEST_CASE("full cayley check") {
  const auto reps = cayley_check(lookup_case("sp_c", 2), 3.0, 5, 7);
  CHECK(reps.size() == 7);
  for (const auto& r : reps) {
    INFO(r.notes);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.claim_id == "cayley-identity");
  }
}
