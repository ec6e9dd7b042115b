#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jorbit/errors.hpp"
#include "jorbit/measures.hpp"

using namespace jorbit;

namespace {

QuadratureSpec deterministic_spec() {
  QuadratureSpec q;
  q.mode = QuadMode::deterministic;
  return q;
}

}  // namespace

TEST_CASE("open density examples") {
  CHECK(density_open(lookup_case("gl_r", 2), ConePoint({2.0, 1.0})).value() == doctest::Approx(3.0));
  CHECK(density_open(lookup_case("o_2n2n", 2), ConePoint({2.0, 1.0})).value() == doctest::Approx(9.0));
  const double z[] = {1.0, 1.0};
  const auto b = open_density_raw(lookup_case("gl_r", 2), z);
  CHECK(b.boundary);
  CHECK(std::isinf(b.log_value));
  CHECK_THROWS_AS(ConePoint({1.0, 1.0}), Error);
  CHECK_THROWS_AS(ConePoint({1.0, 2.0}), Error);
}

TEST_CASE("rank-k density examples") {
  CHECK(density_rank_k(lookup_case("gl_r", 2), 1, ConePoint({2.5})).value() == doctest::Approx(2.5));
  CHECK(density_rank_k(lookup_case("gl_r", 3), 2, ConePoint({2.0, 1.0})).value() == doctest::Approx(6.0));
}

TEST_CASE("density relation at k = n") {
  Stream rng(1);
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    for (int n = 1; n <= 4; ++n) {
      const auto c = lookup_case(id, n);
      std::vector<double> z(static_cast<std::size_t>(n));
      for (auto& v : z) v = 0.1 + 4.0 * rng.uniform();
      std::sort(z.begin(), z.end(), std::greater<>());
      double logp = 0.0;
      for (double v : z) logp += std::log(v);
      const double lhs = rank_k_density_raw(c, n, z).log_value - open_density_raw(c, z).log_value;
      CHECK(lhs == doctest::Approx((c.d - (c.e + 1)) * logp).epsilon(1e-12));
      for (int k = 1; k <= n; ++k) {
        std::vector<double> zk(z.begin(), z.begin() + k);
        CHECK(std::isfinite(rank_k_density_raw(c, k, zk).log_value));
      }
    }
  }
}

TEST_CASE("jacobian of T_a reproduces the open density") {
  const double zero[] = {0.0, 0.0};
  CHECK(jacobian_Ta(lookup_case("gl_r", 2), zero) == 0.0);
  Stream rng(2);
  for (const char* id : {"gl_r", "sp_c", "o_2n2n"}) {
    const auto c = lookup_case(id, 3);
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> z(3), ca(3);
      for (auto& v : z) v = 0.2 + 3.0 * rng.uniform();
      std::sort(z.begin(), z.end(), std::greater<>());
      double p = 1.0;
      for (int i = 0; i < 3; ++i) {
        ca[i] = 0.5 * std::log(z[i]);
        p *= z[i];
      }
      const double lhs = std::pow(p, c.r()) * jacobian_Ta(c, ca) / p;
      CHECK(lhs == doctest::Approx(open_density_raw(c, z).value()).epsilon(1e-10));
    }
  }
}

TEST_CASE("shell integral at rank one") {
  QuadratureSpec q = deterministic_spec();
  q.truncation_radii = {1.0, 2.0};
  Integrand one;
  one.spectral_fn = [](std::span<const double>) { return 1.0; };
  const Estimate e = integrate_polar(lookup_case("gl_r", 2), 1, one, q);
  REQUIRE(e.truncation_trace.size() == 2);
  CHECK(e.truncation_trace[0].value == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(e.truncation_trace[1].value - e.truncation_trace[0].value == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(e.std_error == 0.0);
}

TEST_CASE("ordered cone equals the symmetrized orthant") {
  // Int over z1 > z2 > 0 of |z1^2 - z2^2| exp(-|z|^2) = (1/2) (1/2) Int_0^{pi/2} |cos 2t| dt = 1/4.
  Integrand g;
  g.spectral_fn = [](std::span<const double> z) { return std::exp(-(z[0] * z[0] + z[1] * z[1])); };
  const Estimate e = integrate_polar(lookup_case("gl_r", 2), 2, g, deterministic_spec());
  CHECK(e.real() == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("direct lebesgue oracle") {
  QuadratureSpec q = deterministic_spec();
  const auto gauss = gaussian_test_function(1.0);
  const double pi = std::numbers::pi;
  CHECK(integrate_lebesgue_direct(lookup_case("gl_r", 2), gauss, q).real() == doctest::Approx(pi * pi).epsilon(1e-9));
  CHECK(integrate_lebesgue_direct(lookup_case("sp_c", 2), gauss, q).real() ==
        doctest::Approx(pi * pi * pi).epsilon(1e-9));
  const auto odd = [](const CMatrix& x) { return x(0, 0).real() * std::exp(-x.squaredNorm()); };
  CHECK(std::abs(integrate_lebesgue_direct(lookup_case("gl_r", 2), odd, q).real()) < 1e-12);
  CHECK_THROWS_AS(integrate_lebesgue_direct(lookup_case("gl_c", 2), gauss, q), Error);
}

TEST_CASE("equivariance ratio for identity and compact elements") {
  const auto c = lookup_case("gl_r", 2);
  QuadratureSpec q;
  const auto id = check_equivariance(c, 1, identity_levi(c), q, 1e-12);
  CHECK(id.verdict == Verdict::pass);
  CHECK(std::get<double>(id.measured) == doctest::Approx(1.0).epsilon(1e-14));
  Stream rng(4);
  const auto m = as_levi(haar_sample_M(c, rng));
  const auto rm = check_equivariance(c, 2, m, q, 1e-3);
  CHECK(rm.verdict == Verdict::pass);
  CHECK(std::get<double>(rm.predicted) == doctest::Approx(1.0));
}

TEST_CASE("equivariance scaling example on the deterministic path") {
  const auto c = lookup_case("gl_r", 2);
  const CMatrix a = Eigen::Vector2cd(2.0, 1.0).asDiagonal();
  const auto rep = check_equivariance(c, 1, make_levi(c, a, CMatrix::Identity(2, 2)), QuadratureSpec{}, 2e-3);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(std::get<double>(rep.predicted) == doctest::Approx(0.5));
  CHECK(!rep.std_error.has_value());
}

TEST_CASE("homogeneity of the rank-k measure") {
  const auto rep = polar_homogeneity_report(lookup_case("gl_r", 3), 2, QuadratureSpec{});
  CHECK(rep.verdict == Verdict::pass);
  CHECK(std::get<double>(rep.predicted) == 64.0);
  const auto det = polar_homogeneity_report(lookup_case("gl_r", 2), 1, deterministic_spec());
  CHECK(det.verdict == Verdict::pass);
  CHECK(std::get<double>(det.measured) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("rank out of range") {
  Integrand one;
  one.spectral_fn = [](std::span<const double>) { return 1.0; };
  CHECK_THROWS_AS(integrate_polar(lookup_case("gl_r", 2), 3, one, QuadratureSpec{}), Error);
  CHECK_THROWS_AS(integrate_polar(lookup_case("e7_7", 3), 1, one, QuadratureSpec{}), Error);
}

TEST_CASE("deterministic mode without an M-rule is a capability error") {
  Integrand f;
  f.matrix_fn = [](const CMatrix& x) { return std::exp(-x.squaredNorm()) * x(0, 0).real() * x(0, 0).real(); };
  try {
    integrate_polar(lookup_case("o_2n2n", 2), 1, f, deterministic_spec());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capability);
  }
}
