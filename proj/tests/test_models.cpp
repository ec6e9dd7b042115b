#include <doctest.h>

#include <algorithm>

#include <cmath>

#include "jorbit/errors.hpp"
#include "jorbit/linalg.hpp"
#include "jorbit/models.hpp"

using namespace jorbit;
using cd = std::complex<double>;

namespace {

const char* const kBackends[] = {"gl_r", "sp_c", "o_2n2n", "gl_c"};

CMatrix random_matrix(const CaseDescriptor& c, Stream& rng) {
  const int s = c.matrix_size();
  CMatrix m(s, s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) m(i, j) = c.is_complex_model() ? rng.complex_normal() : cd(rng.normal(), 0.0);
  return m;
}

AlgebraElement random_element(const CaseDescriptor& c, Stream& rng) { return make_element(c, random_matrix(c, rng)); }

std::vector<double> random_cone(int k, Stream& rng) {
  std::vector<double> z(static_cast<std::size_t>(k));
  for (auto& v : z) v = 0.2 + 3.0 * rng.uniform();
  std::sort(z.begin(), z.end(), std::greater<>());
  return z;
}

}  // namespace

TEST_CASE("frames") {
  const auto gl = lookup_case("gl_r", 2);
  const auto f = frame(gl);
  REQUIRE(f.size() == 2);
  CHECK(f[0].entries == CMatrix(Eigen::Matrix2cd{{1, 0}, {0, 0}}));
  CHECK(f[1].entries == CMatrix(Eigen::Matrix2cd{{0, 0}, {0, 1}}));
  const auto sk = frame(lookup_case("o_2n2n", 2));
  CHECK(sk[0].entries(0, 1) == cd(1.0));
  CHECK(sk[0].entries(1, 0) == cd(-1.0));
  CHECK(sk[1].entries(2, 3) == cd(1.0));
  for (const char* id : kBackends) {
    for (int n = 1; n <= 3; ++n) {
      const auto c = lookup_case(id, n);
      CHECK(std::abs(jordan_norm(frame_sum(c, n)) - 1.0) < 1e-14);
    }
  }
  CHECK_THROWS_AS(frame(lookup_case("e7_7", 3)), Error);
}

TEST_CASE("jordan norm examples") {
  const auto gl = lookup_case("gl_r", 2);
  CMatrix x(2, 2);
  x << 1, 2, 3, 4;
  CHECK(jordan_norm(make_element(gl, x)).real() == doctest::Approx(-2.0));
  const auto sk = lookup_case("o_2n2n", 2);
  const CompactElement id = identity_compact(sk);
  const auto y = orbit_point(sk, id, ConePoint({3.0, 0.5}));
  CHECK(jordan_norm(y).real() == doctest::Approx(1.5));
}

TEST_CASE("levi action examples") {
  const auto gl = lookup_case("gl_r", 2);
  const CMatrix a = Eigen::Vector2cd(2.0, 1.0).asDiagonal();
  const LeviElement l = make_levi(gl, a, CMatrix::Identity(2, 2));
  const auto y = levi_act(l, frame(gl)[0]);
  CHECK(std::abs(y.entries(0, 0) - 2.0) < 1e-15);
  CHECK(adjoint_determinant(gl, l) == doctest::Approx(4.0));
  CHECK(character_nu(gl, l) == doctest::Approx(std::pow(4.0, -0.25)));
  CHECK(character_nu(gl, identity_levi(gl)) == doctest::Approx(1.0));
  const auto x = frame_sum(gl, 2);
  CHECK((levi_act(identity_levi(gl), x).entries - x.entries).norm() == 0.0);
}

TEST_CASE("singular levi elements are rejected") {
  const auto gl = lookup_case("gl_r", 2);
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  CHECK_THROWS_AS(make_levi(gl, a, CMatrix::Identity(2, 2)), Error);
}

TEST_CASE("round trip of the polar map") {
  Stream rng(11);
  for (const char* id : kBackends) {
    for (int n = 1; n <= 3; ++n) {
      const auto c = lookup_case(id, n);
      for (int k = 1; k <= n; ++k) {
        for (int rep = 0; rep < 5; ++rep) {
          const auto m = haar_sample_M(c, rng);
          const auto z = random_cone(k, rng);
          const auto x = orbit_point(c, m, ConePoint(z));
          const Eigen::VectorXd s = singular_spectrum(x);
          INFO(id, " n=", n, " k=", k);
          for (int i = 0; i < n; ++i) CHECK(std::abs(s(i) - (i < k ? z[i] : 0.0)) < 1e-9);
          CHECK(orbit_rank(x) == k);
        }
      }
    }
  }
}

TEST_CASE("spectrum examples") {
  const auto gl = lookup_case("gl_r", 2);
  const Eigen::VectorXd s = singular_spectrum(make_element(gl, CMatrix(Eigen::Vector2cd(1.0, 3.0).asDiagonal())));
  CHECK(s(0) == doctest::Approx(3.0));
  CHECK(s(1) == doctest::Approx(1.0));
  CHECK(singular_spectrum(zero_element(gl)).norm() == 0.0);
  CHECK(orbit_rank(zero_element(gl)) == 0);
  CHECK(orbit_rank(frame_sum(lookup_case("gl_r", 3), 2)) == 2);
}

TEST_CASE("norm equivariance, adjoint determinant and character") {
  Stream rng(5);
  for (const char* id : kBackends) {
    const auto c = lookup_case(id, 2);
    INFO(id);
    for (int rep = 0; rep < 10; ++rep) {
      const auto l = random_levi(c, rng, 0.5, 20.0);
      const auto x = random_element(c, rng);
      const double lhs = std::abs(jordan_norm(levi_act(l, x))) / std::abs(jordan_norm(x));
      CHECK(lhs == doctest::Approx(std::pow(adjoint_determinant(c, l), 1.0 / c.r())).epsilon(1e-9));
      CHECK(lhs == doctest::Approx(std::abs(norm_factor(c, l))).epsilon(1e-9));
      CHECK(adjoint_determinant(c, l) == doctest::Approx(adjoint_determinant_dense(c, l)).epsilon(1e-8));
      const auto l2 = random_levi(c, rng, 0.5, 20.0);
      CHECK(character_nu(c, compose(l, l2)) ==
            doctest::Approx(character_nu(c, l) * character_nu(c, l2)).epsilon(1e-10));
      CHECK(orbit_rank(levi_act(l, frame_sum(c, 1))) == 1);
    }
  }
}

TEST_CASE("pairing normalization and invariance") {
  Stream rng(3);
  for (const char* id : kBackends) {
    const auto c = lookup_case(id, 2);
    const auto f = frame(c);
    CHECK(pairing(f[0], f[0]) == doctest::Approx(1.0));
    CHECK(pairing(f[0], f[1]) == doctest::Approx(0.0));
    const auto x = random_element(c, rng);
    const auto y = random_element(c, rng);
    CHECK(pairing(make_element(c, 2.5 * x.entries), y) == doctest::Approx(2.5 * pairing(x, y)));
    const auto m = haar_sample_M(c, rng);
    CHECK(std::abs(pairing(compact_act(m, x), compact_act(m, y)) - pairing(x, y)) < 1e-10);
  }
}

TEST_CASE("haar samples on M") {
  Stream rng(17);
  for (const char* id : kBackends) {
    const auto c = lookup_case(id, 2);
    const auto m = haar_sample_M(c, rng);
    CHECK(linalg::unitarity_residual(m.a) < 1e-12);
    if (m.b.size() > 0) CHECK(linalg::unitarity_residual(m.b) < 1e-12);
  }
  const auto gl = lookup_case("gl_r", 2);
  double sum = 0.0, sum2 = 0.0;
  const int count = 100000;
  for (int i = 0; i < count; ++i) {
    const double v = haar_sample_M(gl, rng).a(0, 0).real();
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / count;
  const double se = std::sqrt((sum2 / count - mean * mean) / count);
  CHECK(std::abs(mean) < 3.0 * se);
  CHECK(sum2 / count == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("peirce restriction") {
  const auto c = lookup_case("gl_r", 3);
  const auto x = make_element(c, CMatrix(Eigen::Vector3cd(3.0, 2.0, 5.0).asDiagonal()));
  const auto y = peirce_restrict(x, 2);
  CHECK(y.n == 2);
  CHECK(y.entries.rows() == 2);
  CHECK(jordan_norm(y).real() == doctest::Approx(6.0));
  const auto sk = lookup_case("o_2n2n", 3);
  CHECK(peirce_restrict(frame_sum(sk, 3), 2).entries.rows() == 4);
}

TEST_CASE("coordinates are orthonormal and match ambient_dim") {
  Stream rng(23);
  for (const char* id : kBackends) {
    for (int n = 1; n <= 3; ++n) {
      const auto c = lookup_case(id, n);
      const auto x = random_element(c, rng);
      const Eigen::VectorXd v = coordinates(x);
      CHECK(v.size() == c.ambient_dim);
      CHECK(v.squaredNorm() == doctest::Approx(frobenius_norm2(x)));
      CHECK((from_coordinates(c, v).entries - x.entries).norm() < 1e-12);
    }
  }
}

TEST_CASE("linear algebra kernels") {
  Stream rng(29);
  CMatrix a = CMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      a(i, j) = rng.normal();
      a(j, i) = -a(i, j);
    }
  const cd pf = linalg::pfaffian(a);
  CHECK(std::abs(pf * pf - a.determinant()) < 1e-12);
  CHECK(std::abs(pf - (a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2))) < 1e-12);
  CMatrix s(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = rng.complex_normal();
  const auto t = linalg::takagi(s);
  CHECK((t.u * t.sigma.cast<cd>().asDiagonal() * t.u.transpose() - s).norm() < 1e-12);
  CHECK(linalg::unitarity_residual(t.u) < 1e-12);
}
