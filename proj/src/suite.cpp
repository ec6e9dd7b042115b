#include "jorbit/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "jorbit/cayley.hpp"
#include "jorbit/errors.hpp"
#include "jorbit/measures.hpp"
#include "jorbit/rankk.hpp"
#include "jorbit/spherical.hpp"

namespace jorbit {

namespace {

VerificationReport skip_record(const CaseDescriptor& c, std::string claim, std::string reason) {
  VerificationReport r;
  r.claim_id = std::move(claim);
  r.case_id = c.case_id;
  r.param("n", std::int64_t{c.n});
  r.verdict = Verdict::skipped;
  r.notes = std::move(reason);
  return r;
}

VerificationReport error_record(const CaseDescriptor& c, std::string claim, const std::exception& e,
                                std::uint64_t seed) {
  VerificationReport r;
  r.claim_id = std::move(claim);
  r.case_id = c.case_id;
  r.param("n", std::int64_t{c.n});
  r.verdict = Verdict::fail;
  r.seed = seed;
  r.notes = std::string("error: ") + e.what();
  return r;
}

AlgebraElement scaled(const AlgebraElement& x, double s) {
  AlgebraElement y = x;
  y.entries *= s;
  return y;
}

}  // namespace

VerificationReport registry_report(const CaseDescriptor& c) {
  Stopwatch clock;
  const auto violations = registry_violations(c);
  VerificationReport r;
  r.claim_id = "registry";
  r.case_id = c.case_id;
  r.param("n", std::int64_t{c.n}).param("d", std::int64_t{c.d}).param("e", std::int64_t{c.e});
  r.param("ambient_dim", std::int64_t{c.ambient_dim}).param("backend", c.backend_available);
  r.predicted = std::int64_t{0};
  r.measured = static_cast<std::int64_t>(violations.size());
  r.verdict = violations.empty() ? Verdict::pass : Verdict::fail;
  for (const auto& v : violations) r.notes += (r.notes.empty() ? "" : "; ") + v;
  if (r.notes.empty()) r.notes = "row invariants hold";
  r.runtime_seconds = clock.seconds();
  return r;
}

std::vector<VerificationReport> model_reports(const CaseDescriptor& c, std::uint64_t seed, int points) {
  Stopwatch clock;
  Stream rng(seed);
  const int s = c.matrix_size();
  double roundtrip = 0.0;
  double norm_dev = 0.0;
  for (int i = 0; i < points; ++i) {
    CMatrix m(s, s);
    for (int col = 0; col < s; ++col)
      for (int row = 0; row < s; ++row) m(row, col) = std::complex<double>(rng.normal(), rng.normal());
    const AlgebraElement x = make_element(c, m);
    const AlgebraElement back = from_coordinates(c, coordinates(x));
    roundtrip = std::max(roundtrip, (back.entries - x.entries).cwiseAbs().maxCoeff());
    const AlgebraElement again = make_element(c, x.entries);
    roundtrip = std::max(roundtrip, (again.entries - x.entries).cwiseAbs().maxCoeff());

    const LeviElement l = random_levi(c, rng, 0.3, 10.0);
    const double lhs = std::abs(jordan_norm(levi_act(l, x)));
    const double rhs = std::abs(norm_factor(c, l)) * std::abs(jordan_norm(x));
    norm_dev = std::max(norm_dev, std::abs(lhs - rhs) / std::max(rhs, 1e-300));
  }
  std::vector<VerificationReport> out(2);
  auto& a = out[0];
  a.claim_id = "model-roundtrip";
  a.case_id = c.case_id;
  a.param("n", std::int64_t{c.n}).param("points", std::int64_t{points});
  a.predicted = 0.0;
  a.measured = roundtrip;
  a.tolerance = 1e-12;
  a.verdict = roundtrip <= 1e-12 ? Verdict::pass : Verdict::fail;
  a.seed = seed;
  a.notes = "coordinates and canonical form are inverse to each other";
  auto& b = out[1];
  b.claim_id = "norm-equivariance";
  b.case_id = c.case_id;
  b.param("n", std::int64_t{c.n}).param("points", std::int64_t{points});
  b.predicted = 0.0;
  b.measured = norm_dev;
  b.tolerance = 1e-10;
  b.verdict = norm_dev <= 1e-10 ? Verdict::pass : Verdict::fail;
  b.seed = seed;
  b.anchor = "the Jordan norm transforms by a character of L";
  b.notes = "|N(l x)| = |norm_factor(l)| |N(x)|";
  const double t = clock.seconds();
  a.runtime_seconds = t;
  b.runtime_seconds = t;
  return out;
}

std::vector<AlgebraElement> fourier_test_points(const CaseDescriptor& c) {
  const auto y1 = frame(c)[0];
  return {zero_element(c), y1, scaled(y1, 2.0), frame_sum(c, std::min(2, c.n))};
}

LeviElement scaling_levi(const CaseDescriptor& c) {
  const int s = c.matrix_size();
  CMatrix a = CMatrix::Identity(s, s);
  a(0, 0) = 2.0;
  if (c.model_kind == ModelKind::full_matrix) return make_levi(c, a, CMatrix::Identity(s, s));
  return make_levi(c, a);
}

std::vector<VerificationReport> run_suite(std::string_view case_id, int n, const QuadratureSpec& spec,
                                          const SuiteOptions& options, std::optional<int> family_parameter) {
  spec.validate();
  const CaseDescriptor c = lookup_case(case_id, n, family_parameter);
  std::vector<VerificationReport> out;
  out.push_back(registry_report(c));

  const char* later[] = {"model-roundtrip", "polar-open",  "equivariance",   "phi-l2-threshold",
                         "bessel-selftest", "rank1-fourier", "rankk-fourier", "cayley-identity",
                         "l2-certificate",  "g-l2-rank1",  "stability"};
  if (!c.backend_available) {
    for (const char* claim : later) out.push_back(skip_record(c, claim, "metadata-only case: no matrix model"));
    return out;
  }

  auto step = [&](const char* claim, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      out.push_back(error_record(c, claim, e, spec.seed));
    }
  };

  step("model-roundtrip", [&] {
    for (auto& r : model_reports(c, spec.seed)) out.push_back(std::move(r));
  });

  step("polar-open", [&] { out.push_back(polar_formula_report(c, spec)); });

  step("equivariance", [&] {
    Stream rng(mix64(spec.seed ^ 0xE0u));
    for (int k : {1, c.n}) {
      std::vector<LeviElement> levis{scaling_levi(c)};
      for (int i = 0; i < options.random_levis; ++i) levis.push_back(random_levi(c, rng));
      for (const auto& l : levis) out.push_back(check_equivariance(c, k, l, spec, options.equivariance_tolerance));
      if (k == c.n) {
        out.push_back(check_equivariance(c, k, levis.front(), spec, options.equivariance_tolerance,
                                         gaussian_test_function(), true));
      }
      if (c.n == 1) break;
    }
  });

  step("phi-l2-threshold", [&] {
    const double th = l2_threshold(c);
    std::vector<double> ts{th - 0.1, th + 0.1};
    if (c.case_id == "sp_c") ts.push_back(-static_cast<double>(c.d * c.n));
    for (double t : ts) out.push_back(phi_l2_verdict(SphericalParams{c.case_id, t}, c.n, spec));
    for (int k = 2; k <= c.n; ++k) {
      out.push_back(phi_power_identity_random(c, k, options.phi_power_points, spec.seed));
    }
  });

  step("bessel-selftest", [&] {
    for (auto& r : bessel_selftest()) out.push_back(std::move(r));
  });

  step("rank1-fourier", [&] {
    out.push_back(rank1_mass_report(c));
    const auto pts = fourier_test_points(c);
    out.push_back(rank1_fourier_identity(c, pts, spec));
  });

  if (c.n >= 3) {
    step("rankk-fourier", [&] {
      const auto y1 = frame(c)[0];
      std::vector<int> ks{2};
      if (std::min(3, c.n) != 2) ks.push_back(std::min(3, c.n));
      for (int k : ks) {
        out.push_back(rankk_fourier_report(c, k, y1, spec));
        out.push_back(rankk_rank_report(c, k, options.rank_draws, spec.seed));
      }
    });
  } else {
    out.push_back(skip_record(c, "rankk-fourier", "rank-k transforms need n >= 3"));
  }

  if (c.case_id == "sp_c") {
    if (c.n <= 2) {
      step("cayley-identity", [&] {
        for (auto& r : cayley_check(c, options.cayley_s, options.cayley_points, spec.seed)) out.push_back(std::move(r));
      });
    } else {
      out.push_back(skip_record(c, "cayley-identity", "Cayley operator implemented for n <= 2"));
    }
  }

  if (c.n >= 2) {
    step("l2-certificate", [&] {
      for (int k = 1; k < c.n; ++k) out.push_back(l2_certificate_report(c, k));
    });
    step("g-l2-rank1", [&] { out.push_back(g_l2_rank1(c, spec)); });
    step("stability", [&] {
      for (int k = 1; k < c.n; ++k) out.push_back(stability_restriction_check(c, k));
    });
  } else {
    for (const char* claim : {"l2-certificate", "g-l2-rank1", "stability"}) {
      out.push_back(skip_record(c, claim, "needs n >= 2"));
    }
  }
  return out;
}

}  // namespace jorbit
