#include <doctest.h>

#include <functional>

#include "jorbit/case_registry.hpp"
#include "jorbit/errors.hpp"

using namespace jorbit;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::parse;
}

}  // namespace

TEST_CASE("multiplicities of the backend rows") {
  const auto gl = lookup_case("gl_r", 2);
  CHECK(gl.d == 1);
  CHECK(gl.e == 0);
  CHECK(gl.ambient_dim == 4);
  const auto sp = lookup_case("sp_c", 2);
  CHECK(sp.d == 1);
  CHECK(sp.e == 1);
  CHECK(sp.ambient_dim == 6);
  const auto o = lookup_case("o_2n2n", 2);
  CHECK(o.d == 2);
  CHECK(o.e == 0);
  CHECK(o.ambient_dim == 6);
  const auto glc = lookup_case("gl_c", 2);
  CHECK(glc.d == 2);
  CHECK(glc.e == 1);
  CHECK(glc.ambient_dim == 8);
}

TEST_CASE("lookup errors") {
  CHECK(kind_of([] { lookup_case("nope", 2); }) == ErrorKind::not_found);
  CHECK(kind_of([] { lookup_case("o_pq_unequal", 2); }) == ErrorKind::admissibility);
  CHECK(kind_of([] { lookup_case("e7_7", 2); }) == ErrorKind::out_of_range);
  CHECK_NOTHROW(lookup_case("e7_7", 3));
}

TEST_CASE("l2 thresholds") {
  CHECK(l2_threshold(lookup_case("gl_r", 2)) == doctest::Approx(-1.5));
  CHECK(l2_threshold(lookup_case("sp_c", 2)) == doctest::Approx(-2.0));
  CHECK(l2_threshold(lookup_case("o_2n2n", 2)) == doctest::Approx(-2.5));
}

TEST_CASE("equivariance exponents") {
  CHECK(equivariance_exponent(lookup_case("gl_r", 2), 1) == 2.0);
  CHECK(equivariance_exponent(lookup_case("o_2n2n", 2), 1) == 4.0);
  for (const auto& c : list_cases(3)) {
    CHECK(lebesgue_equivariance_exponent(c) == 2.0 * c.r());
  }
}

TEST_CASE("bessel parameter depends on (d, e) only") {
  CHECK(bessel_parameter(lookup_case("gl_r", 2)) == 0.0);
  CHECK(bessel_parameter(lookup_case("o_2n2n", 2)) == 0.5);
  CHECK(bessel_parameter(lookup_case("sp_c", 2)) == -0.5);
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    const double tau = bessel_parameter(lookup_case(id, 1));
    for (int n = 2; n <= 5; ++n) CHECK(bessel_parameter(lookup_case(id, n)) == tau);
  }
}

TEST_CASE("row invariants for every rank") {
  for (int n = 1; n <= 4; ++n) {
    for (const auto& c : list_cases(n)) {
      INFO(c.case_id);
      CHECK(registry_violations(c).empty());
      CHECK(c.ambient_dim == c.n * (c.e + 1) + c.d * c.n * (c.n - 1));
      CHECK(c.r() >= 1);
      CHECK(c.backend_available == (c.model_kind != ModelKind::metadata_only));
      CHECK(l2_threshold(c) == doctest::Approx(-c.r() + (c.e + 1) / 2.0));
    }
  }
}

TEST_CASE("sub_case keeps d and e") {
  const auto c = lookup_case("sp_c", 3);
  const auto s = sub_case(c, 2);
  CHECK(s.n == 2);
  CHECK(s.d == c.d);
  CHECK(s.e == c.e);
  CHECK(s.case_id == c.case_id);
}
