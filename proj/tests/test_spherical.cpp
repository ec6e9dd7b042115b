#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jorbit/errors.hpp"
#include "jorbit/spherical.hpp"
#include "jorbit/suite.hpp"

using namespace jorbit;

TEST_CASE("phi_t examples") {
  const auto c = lookup_case("gl_r", 2);
  CHECK(phi_t(-2.0, zero_element(c)) == 1.0);
  CHECK(phi_t(-2.0, frame(c)[0]) == doctest::Approx(0.5).epsilon(1e-15));
  const double z[] = {1.0, 0.0};
  CHECK(phi_t_spectral(-2.0, z) == doctest::Approx(0.5));
  CHECK(phi_t(SphericalParams{"gl_r", -2.0}, frame(c)[0]) == doctest::Approx(0.5));
}

TEST_CASE("phi_t is M-invariant") {
  Stream rng(8);
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    const auto c = lookup_case(id, 2);
    CMatrix x = CMatrix::Zero(c.matrix_size(), c.matrix_size());
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j) x(i, j) = c.is_complex_model() ? rng.complex_normal() : rng.normal();
    const auto e = make_element(c, x);
    const auto m = haar_sample_M(c, rng);
    const double a = phi_t(-1.3, e);
    CHECK(std::abs(phi_t(-1.3, compact_act(m, e)) / a - 1.0) < 1e-12);
  }
}

TEST_CASE("phi power identity") {
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    for (int n = 2; n <= 3; ++n) {
      const auto c = lookup_case(id, n);
      for (int k = 1; k <= n; ++k) CHECK(phi_power_identity_random(c, k, 100, 13).verdict == Verdict::pass);
    }
  }
  const auto c = lookup_case("gl_r", 2);
  const AlgebraElement pts[] = {frame(c)[0]};
  CHECK(phi_power_identity(c, 2, pts).verdict == Verdict::pass);
}

TEST_CASE("l2 prediction sign") {
  const auto gl = lookup_case("gl_r", 2);
  CHECK(phi_l2_predicted_finite(gl, -1.6));
  CHECK(!phi_l2_predicted_finite(gl, -1.4));
  CHECK(!phi_l2_predicted_finite(lookup_case("sp_c", 2), -2.0));
}

TEST_CASE("l2 scans on both sides of the threshold") {
  const QuadratureSpec q;
  const auto fin = phi_l2_scan(lookup_case("gl_r", 2), -1.6, q);
  CHECK(fin.verdict == ScanVerdict::finite);
  const auto div = phi_l2_scan(lookup_case("gl_r", 2), -1.4, q);
  CHECK(div.verdict == ScanVerdict::divergent);
  const auto sp = phi_l2_verdict(SphericalParams{"sp_c", -2.0}, 2, q);
  CHECK(std::get<std::string>(sp.measured) == "divergent");
  CHECK(sp.verdict == Verdict::pass);
}

TEST_CASE("bessel values and identities") {
  CHECK(bessel_k(0.5, 1.0) == doctest::Approx(std::sqrt(std::numbers::pi / 2.0) * std::exp(-1.0)).epsilon(1e-10));
  CHECK(bessel_k(0.5, 1.0) == doctest::Approx(0.461068).epsilon(1e-6));
  for (double tau : {0.0, 0.3, 1.7, 4.2}) {
    for (double z : {1e-3, 0.5, 2.0, 17.0}) {
      INFO("tau=", tau, " z=", z);
      CHECK(bessel_k(-tau, z) == bessel_k(tau, z));
      const double lhs = bessel_k(tau + 1.0, z) - bessel_k(tau - 1.0, z);
      CHECK(lhs == doctest::Approx(2.0 * tau / z * bessel_k(tau, z)).epsilon(1e-9).scale(bessel_k(tau + 1.0, z)));
    }
  }
  CHECK_THROWS_AS(bessel_k(0.0, 0.0), Error);
  CHECK_THROWS_AS(bessel_k(0.0, -1.0), Error);
}

TEST_CASE("upsilon asymptotics") {
  const double gamma = 0.57721566490153286;
  CHECK(upsilon(0.0, 1e-4) == doctest::Approx(-std::log(0.5e-4) - gamma).epsilon(0.01));
  CHECK(upsilon(0.0, 20.0) / upsilon(0.0, 10.0) == doctest::Approx(std::exp(-10.0) * std::sqrt(0.5)).epsilon(0.05));
  CHECK(upsilon(BesselKernel{0.5, "o_2n2n"}, 2.0) == doctest::Approx(bessel_k(0.5, 2.0) / std::sqrt(2.0)));
}

TEST_CASE("mellin oracle") {
  CHECK(bessel_mellin(0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  const auto rule = radial_rule(128.0, 16);
  const double q = rule.integrate([](double z) { return bessel_k(0.7, z) * std::pow(z, 2.3); });
  CHECK(q == doctest::Approx(bessel_mellin(0.7, 3.3)).epsilon(1e-10));
}

TEST_CASE("rank-one masses") {
  const auto gl = lookup_case("gl_r", 2);
  CHECK(std::abs(rank1_mass(gl).real() - 1.0) < 1e-8);
  CHECK(rank1_mass_closed_form(gl) == doctest::Approx(1.0));
  for (const char* id : {"sp_c", "o_2n2n", "gl_c"}) {
    const auto c = lookup_case(id, 2);
    CHECK(rank1_mass_report(c).verdict == Verdict::pass);
  }
}

TEST_CASE("K_0 cosine transform") {
  for (double x : {0.0, 1.0, 5.0}) {
    CHECK(k0_cosine_transform(x) == doctest::Approx(std::numbers::pi / 2.0 / std::sqrt(1.0 + x * x)).epsilon(1e-6));
  }
}

TEST_CASE("rank-one fourier transform at zero is the mass") {
  const auto gl = lookup_case("gl_r", 2);
  const Estimate e = rank1_fourier(gl, zero_element(gl), QuadratureSpec{});
  CHECK(e.real() == doctest::Approx(rank1_mass_closed_form(gl)).epsilon(1e-8));
  CHECK(trace_converged(e));
}

TEST_CASE("rank-one fourier identity, deterministic GL path") {
  const auto gl = lookup_case("gl_r", 2);
  const auto pts = fourier_test_points(gl);
  CHECK(pts.size() == 4);
  const auto rep = rank1_fourier_identity(gl, pts, QuadratureSpec{}, 0.02);
  CHECK(rep.verdict == Verdict::pass);
}

TEST_CASE("bessel self-test battery") {
  for (const auto& r : bessel_selftest()) CHECK(r.verdict == Verdict::pass);
}
