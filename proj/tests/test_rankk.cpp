#include <doctest.h>

#include <algorithm>

#include <cmath>

#include "jorbit/errors.hpp"
#include "jorbit/rankk.hpp"
#include "jorbit/spherical.hpp"

using namespace jorbit;

TEST_CASE("sampler table") {
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    const auto c = lookup_case(id, 2);
    const auto s = make_rank1_sampler(c, 3);
    CHECK(s.cdf.front() == 0.0);
    CHECK(s.cdf.back() == 1.0);
    CHECK(std::adjacent_find(s.cdf.begin(), s.cdf.end(), std::greater_equal<>()) == s.cdf.end());
    CHECK(s.tail_mass < 1e-10);
    CHECK(s.mass == doctest::Approx(rank1_mass_closed_form(c)).epsilon(1e-12));
    CHECK(sampler_cdf(s, sampler_quantile(s, 0.3)) == doctest::Approx(0.3).epsilon(1e-6));
  }
}

TEST_CASE("radial law: mean and Kolmogorov-Smirnov distance") {
  const auto c = lookup_case("gl_r", 2);
  const auto s = make_rank1_sampler(c, 5);
  Stream rng(5);
  const int count = 100000;
  std::vector<double> z(count);
  double sum = 0.0, sum2 = 0.0;
  for (auto& v : z) {
    v = std::sqrt(frobenius_norm2(sample_rank1(s, rng)));
    sum += v;
    sum2 += v * v;
  }
  // E[z] = Int K_0(z) z^2 dz / Int K_0(z) z dz.
  const double expected = bessel_mellin(0.0, 3.0) / bessel_mellin(0.0, 2.0);
  const double mean = sum / count;
  CHECK(std::abs(mean - expected) < 3.0 * std::sqrt((sum2 / count - mean * mean) / count));
  std::sort(z.begin(), z.end());
  double ks = 0.0;
  for (int i = 0; i < count; ++i) {
    const double f = sampler_cdf(s, z[i]);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / count), std::abs(f - static_cast<double>(i + 1) / count)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("samples are rank one and seeded") {
  const auto c = lookup_case("sp_c", 2);
  const auto s = make_rank1_sampler(c);
  Stream a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    const auto x = sample_rank1(s, a);
    CHECK(orbit_rank(x) == 1);
    CHECK(x.entries == sample_rank1(s, b).entries);
  }
}

TEST_CASE("sums of rank-one samples") {
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    const auto c = lookup_case(id, 3);
    Stream rng(10);
    for (int k = 1; k <= 3; ++k) {
      for (int i = 0; i < 50; ++i) CHECK(orbit_rank(sum_sample_rankk(c, k, rng)) == k);
    }
    const auto full = sum_sample_rankk(c, 3, rng);
    CHECK(std::abs(jordan_norm(full)) > 0.0);
    CHECK(rankk_rank_report(c, 2, 2000, 4).verdict == Verdict::pass);
  }
}

TEST_CASE("mass identity at x = 0") {
  const auto c = lookup_case("gl_r", 3);
  const double mass = rank1_mass_closed_form(c);
  const Estimate e = rankk_fourier_mc(c, 2, zero_element(c), 1000, 1);
  CHECK(e.real() == doctest::Approx(mass * mass).epsilon(1e-14));
  CHECK(e.std_error == 0.0);
}

TEST_CASE("certificate examples") {
  const auto gl = l2_certificate(lookup_case("gl_r", 3), 2);
  CHECK(gl.t == Rational(1));
  CHECK(gl.s == Rational(1));
  CHECK(gl.l1 == Rational(0));
  CHECK(gl.l2 == Rational(1));
  CHECK(gl.branch == CertificateBranch::generic);
  CHECK(gl.valid());
  const auto sp = l2_certificate(lookup_case("sp_c", 3), 1);
  CHECK(sp.s == Rational(3));
  CHECK(sp.l1 == Rational(1));
  CHECK(sp.l2 == Rational(2));
  CHECK(sp.branch == CertificateBranch::sp_c);
  try {
    l2_certificate(lookup_case("gl_r", 3), 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::out_of_range);
  }
}

TEST_CASE("certificates for every backend and 1 <= k < n <= 4") {
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    for (int n = 2; n <= 4; ++n) {
      for (int k = 1; k < n; ++k) {
        const auto cert = l2_certificate(lookup_case(id, n), k);
        INFO(id, " n=", n, " k=", k);
        CHECK(cert.valid());
        if (cert.branch == CertificateBranch::sp_c) {
          CHECK(cert.l1 >= Rational(1));
          CHECK(cert.l2 >= Rational(1));
        }
      }
    }
  }
}

TEST_CASE("rank-one L2 integrals") {
  CHECK(rank1_l2_closed_form(lookup_case("gl_r", 2)) == doctest::Approx(0.5).epsilon(1e-14));
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    for (int n = 2; n <= 3; ++n) CHECK(g_l2_rank1(lookup_case(id, n), QuadratureSpec{}).verdict == Verdict::pass);
  }
}

TEST_CASE("stability of the rank-one kernel") {
  for (const char* id : {"gl_r", "sp_c", "o_2n2n", "gl_c"}) {
    for (int n = 2; n <= 4; ++n)
      for (int k = 1; k < n; ++k) CHECK(stability_restriction_check(lookup_case(id, n), k).verdict == Verdict::pass);
  }
}

TEST_CASE("rank-k fourier consistency on five points") {
  const auto c = lookup_case("gl_r", 3);
  const auto f = frame(c);
  std::vector<AlgebraElement> xs{zero_element(c), f[0], make_element(c, 2.0 * f[0].entries), frame_sum(c, 2),
                                 make_element(c, 0.5 * frame_sum(c, 3).entries)};
  QuadratureSpec q;
  for (int k : {2, 3}) {
    for (const auto& x : xs) {
      const auto rep = rankk_fourier_report(c, k, x, q);
      INFO("k=", k, " measured=", std::get<double>(rep.measured));
      CHECK(rep.verdict == Verdict::pass);
    }
  }
}
