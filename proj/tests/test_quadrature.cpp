#include <doctest.h>

#include <algorithm>

#include <cmath>
#include <numbers>

#include "jorbit/errors.hpp"
#include "jorbit/quadrature.hpp"

using namespace jorbit;

TEST_CASE("gauss exactness") {
  CHECK(gauss_nodes(2).integrate([](double x) { return x * x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(gauss_nodes(3, 0.0, 1.0).integrate([](double x) { return std::pow(x, 5); }) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  for (int n = 2; n <= 20; ++n) {
    const auto rule = gauss_nodes(n, -1.0, 2.0);
    const int deg = 2 * n - 1;
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    CHECK(rule.integrate([deg](double x) { return std::pow(x, deg); }) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("half-line panels") {
  const auto bp = half_line_breakpoints(64.0, 4);
  const auto rule = composite_rule(bp, 16);
  const double v = rule.integrate([](double z) { return std::exp(-z) * z; });
  CHECK(std::abs(v - 1.0) < 1e-10);
  CHECK(bp.back() == 64.0);
}

TEST_CASE("gauss convergence order") {
  auto err = [](int n) {
    return std::abs(gauss_nodes(n, 0.0, 1.0).integrate([](double x) { return std::exp(std::sin(3.0 * x)); }) -
                    gauss_nodes(40, 0.0, 1.0).integrate([](double x) { return std::exp(std::sin(3.0 * x)); }));
  };
  for (int n : {2, 3, 4}) CHECK(err(2 * n) * 4.0 <= err(n));
}

TEST_CASE("monte carlo moments and determinism") {
  auto sample = [](Stream& s) { return s.normal(); };
  const Estimate one = mc_integrate(sample, [](double) { return 1.0; }, McOptions{1000, 3, 2.5, 1});
  CHECK(one.value.real() == 2.5);
  CHECK(one.std_error == 0.0);
  const Estimate m2 = mc_integrate(sample, [](double x) { return x * x; }, McOptions{100000, 3, 1.0, 1});
  CHECK(std::abs(m2.real() - 1.0) <= 3.0 * m2.std_error);
  const Estimate again = mc_integrate(sample, [](double x) { return x * x; }, McOptions{100000, 3, 1.0, 4});
  CHECK(again.value == m2.value);
  CHECK(again.std_error == m2.std_error);
}

TEST_CASE("poisoned samples name their location") {
  auto sample = [](Stream& s) { return s.uniform(); };
  try {
    mc_integrate(sample, [](double x) { return x < 0.5 ? std::nan("") : 1.0; }, McOptions{100, 1, 1.0, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::poisoned_sample);
    CHECK(std::string(e.what()).find("batch") != std::string::npos);
  }
}

TEST_CASE("ratio of shared-sample outputs") {
  auto sample = [](Stream& s, std::span<std::complex<double>> out) {
    const double x = s.normal();
    out[0] = 1.0 + 0.1 * x;
    out[1] = 2.0 * (1.0 + 0.1 * x);
  };
  const McMany mc = mc_integrate_many(2, sample, McOptions{10000, 9, 1.0, 1});
  const RatioEstimate r = mc_ratio(mc, 1, 0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.std_error < 1e-12);
}

TEST_CASE("stream forks are independent of chunk count") {
  const Stream root(42);
  Stream a = root.fork(7);
  Stream b = Stream(42).fork(7);
  for (int i = 0; i < 10; ++i) CHECK(a.bits() == b.bits());
  CHECK(Stream(42).fork(1).bits() != Stream(42).fork(2).bits());
}

TEST_CASE("divergence scan battery") {
  const auto radii = doubling_radii(1, 12);
  auto inverse_square = [](double r) { return 1.0 - 1.0 / r; };
  CHECK(divergence_scan(inverse_square, radii).verdict == ScanVerdict::finite);
  CHECK(divergence_scan([](double r) { return 0.5 * r * r; }, radii).verdict == ScanVerdict::divergent);
  CHECK(divergence_scan([](double r) { return 1.0 - std::exp(-r); }, radii).verdict == ScanVerdict::finite);
  CHECK(divergence_scan([](double r) { return std::log(r); }, radii).verdict == ScanVerdict::divergent);
  for (double alpha : {0.1, 0.2, 0.5, 1.0, 2.0}) {
    INFO("alpha=", alpha);
    const auto v = divergence_scan([alpha](double r) { return std::pow(r, alpha); }, doubling_radii(1, 48)).verdict;
    CHECK(v != ScanVerdict::finite);
  }
}

TEST_CASE("spec validation") {
  QuadratureSpec q;
  CHECK_NOTHROW(q.validate());
  q.points_per_axis = 4;
  CHECK_THROWS_AS(q.validate(), Error);
  q = QuadratureSpec{};
  q.truncation_radii = {4.0};
  CHECK_THROWS_AS(q.validate(), Error);
  q.truncation_radii = {8.0, 4.0};
  CHECK_THROWS_AS(q.validate(), Error);
  CHECK(parse_quad_mode("monte_carlo") == QuadMode::monte_carlo);
  CHECK_THROWS_AS(parse_quad_mode("bogus"), Error);
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}
