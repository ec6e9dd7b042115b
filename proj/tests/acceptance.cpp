// Acceptance criteria 1-9: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "jorbit/cayley.hpp"
#include "jorbit/measures.hpp"
#include "jorbit/rankk.hpp"
#include "jorbit/spherical.hpp"
#include "jorbit/suite.hpp"

using namespace jorbit;

namespace {

const char* const kBackends[] = {"gl_r", "sp_c", "o_2n2n", "gl_c"};

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double as_double(const ReportValue& v) { return std::get<double>(v); }

void criterion_1(Outcome& o) {
  for (const char* id : {"gl_r", "sp_c"}) {
    const auto rep = polar_formula_report(lookup_case(id, 2), QuadratureSpec{}, 1e-3);
    const double dev = std::abs(as_double(rep.measured) / as_double(rep.predicted) - 1.0);
    o.require(rep.verdict == Verdict::pass && rep.tolerance == 1e-3, std::string(id) + " ratio within 1e-3");
    o.require(rep.runtime_seconds < 60.0, std::string(id) + " runtime < 60 s");
    o.detail << id << ": worst ratio deviation " << dev << " in " << rep.runtime_seconds << " s; ";
  }
}

void criterion_2(Outcome& o) {
  const auto gl = lookup_case("gl_r", 2);
  const LeviElement l = scaling_levi(gl);
  QuadratureSpec mc;
  mc.mode = QuadMode::monte_carlo;
  mc.mc_samples = 1000000;
  const auto r_mc = check_equivariance(gl, 1, l, mc, 0.02);
  o.require(r_mc.verdict == Verdict::pass, "GL scaling, Monte Carlo");
  const auto r_det = check_equivariance(gl, 1, l, QuadratureSpec{}, 0.002);
  o.require(r_det.verdict == Verdict::pass && !r_det.std_error, "GL scaling, deterministic");
  o.detail << "scaling: mc " << as_double(r_mc.measured) << ", deterministic " << as_double(r_det.measured)
           << " (predicted 0.5); ";
  QuadratureSpec q;
  q.mc_samples = 1000000;
  for (const char* id : kBackends) {
    const auto c = lookup_case(id, 2);
    Stream rng(2024);
    double worst = 0.0;
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
      const LeviElement li = random_levi(c, rng);
      for (int k : {1, c.n}) {
        const auto r = check_equivariance(c, k, li, q, 0.02);
        worst = std::max(worst, std::abs(as_double(r.measured) / as_double(r.predicted) - 1.0));
        if (r.verdict != Verdict::pass) ++bad;
      }
    }
    o.require(bad == 0, std::string(id) + " random Levi elements");
    o.detail << id << " worst " << worst << "; ";
  }
}

void criterion_3(Outcome& o) {
  struct Row {
    const char* id;
    double t;
    const char* expected;
  };
  for (const Row& row : {Row{"gl_r", -1.6, "finite"}, Row{"gl_r", -1.4, "divergent"}, Row{"o_2n2n", -2.6, "finite"},
                         Row{"o_2n2n", -2.4, "divergent"}, Row{"sp_c", -2.0, "divergent"}}) {
    const auto rep = phi_l2_verdict(SphericalParams{row.id, row.t}, 2, QuadratureSpec{});
    const std::string measured = std::get<std::string>(rep.measured);
    o.require(rep.verdict == Verdict::pass && measured == row.expected, std::string(row.id) + " t=" + std::to_string(row.t));
    o.require(rep.runtime_seconds < 10.0, std::string(row.id) + " scan < 10 s");
    o.detail << row.id << " t=" << row.t << " " << measured << "; ";
  }
}

void criterion_4(Outcome& o) {
  const auto gl = lookup_case("gl_r", 2);
  QuadratureSpec q;
  q.mode = QuadMode::deterministic;
  const auto pts = fourier_test_points(gl);
  const auto rep = rank1_fourier_identity(gl, pts, q, 0.02);
  o.require(rep.verdict == Verdict::pass && pts.size() == 4, "ratio constant over 4 points");
  o.detail << "ratio spread " << std::abs(as_double(rep.measured) / as_double(rep.predicted) - 1.0) << "; ";
  for (double x : {0.0, 1.0, 5.0}) {
    const double exact = std::numbers::pi / 2.0 / std::sqrt(1.0 + x * x);
    const double err = std::abs(k0_cosine_transform(x) / exact - 1.0);
    o.require(err <= 1e-6, "K_0 cosine transform at x=" + std::to_string(x));
    o.detail << "x=" << x << " err " << err << "; ";
  }
}

void criterion_5(Outcome& o) {
  const auto gl = lookup_case("gl_r", 2);
  const double mass = rank1_mass(gl).real();
  o.require(std::abs(mass - 1.0) <= 1e-8, "mass = 1");
  const auto l2 = g_l2_rank1(gl, QuadratureSpec{}, 1e-6);
  o.require(l2.verdict == Verdict::pass && std::abs(as_double(l2.measured) - 0.5) <= 0.5e-6, "L2 integral = 1/2");
  o.detail << "mass " << mass << ", L2 " << as_double(l2.measured);
}

void criterion_6(Outcome& o) {
  const auto reps = cayley_check(lookup_case("sp_c", 2), 3.0, 5, 7);
  int symbolic = 0;
  for (const auto& r : reps) {
    o.require(r.verdict == Verdict::pass, r.notes);
    for (const auto& [k, v] : r.parameters) {
      if (k == "scheme" && std::get<std::string>(v) == "symbolic") ++symbolic;
    }
  }
  o.require(symbolic == 4, "four symbolic identities");
  const auto c1 = cayley_constant(2, 1);
  o.require(c1 && *c1 == Rational(3, 2), "c_1 = 3/2");
  o.detail << reps.size() << " reports; " << reps[4].notes << "; " << reps.back().notes;
}

void criterion_7(Outcome& o) {
  for (const char* id : kBackends) {
    for (int n = 2; n <= 3; ++n) {
      const auto c = lookup_case(id, n);
      for (int k = 1; k <= n; ++k) {
        o.require(phi_power_identity_random(c, k, 100, 31).verdict == Verdict::pass,
                  std::string(id) + " phi power identity");
      }
    }
  }
  const auto gl = lookup_case("gl_r", 3);
  QuadratureSpec q;
  q.mc_samples = 1000000;
  const auto f = rankk_fourier_report(gl, 2, frame(gl)[0], q);
  o.require(f.verdict == Verdict::pass, "rank-2 fourier against rank-1 squared");
  const auto r = rankk_rank_report(gl, 2, 100000, 7);
  o.require(r.verdict == Verdict::pass, "rank additivity");
  o.detail << "rank-2 fourier " << as_double(f.measured) << " vs " << as_double(f.predicted) << " (se "
           << f.std_error.value_or(0.0) << "); rank violations " << std::get<std::int64_t>(r.measured);
}

void criterion_8(Outcome& o) {
  int certs = 0, stab = 0;
  for (const char* id : kBackends) {
    for (int n = 2; n <= 4; ++n) {
      const auto c = lookup_case(id, n);
      for (int k = 1; k < n; ++k) {
        o.require(l2_certificate(c, k).valid(), std::string(id) + " certificate");
        o.require(l2_certificate_report(c, k).verdict == Verdict::pass, std::string(id) + " certificate report");
        const auto s = stability_restriction_check(c, k);
        o.require(s.verdict == Verdict::pass && as_double(s.measured) <= 1e-12, std::string(id) + " stability");
        ++certs;
        ++stab;
      }
    }
  }
  o.detail << certs << " certificates, " << stab << " stability checks";
}

std::string stripped(std::vector<VerificationReport> reps) {
  for (auto& r : reps) r.runtime_seconds = 0.0;
  return emit_report(reps, ReportFormat::json);
}

void criterion_9(Outcome& o) {
  QuadratureSpec q;
  q.seed = 99;
  const auto a = run_suite("gl_r", 2, q);
  const auto b = run_suite("gl_r", 2, q);
  o.require(stripped(a) == stripped(b), "gl_r suite bytes");
  o.require(exit_code(a) == 0, "gl_r suite passes");
  QuadratureSpec q1 = q, q2 = q;
  q1.workers = 1;
  q2.workers = 3;
  const auto c = run_suite("gl_c", 2, q1);
  const auto d = run_suite("gl_c", 2, q2);
  o.require(stripped(c) == stripped(d), "gl_c suite bytes across worker counts");
  o.detail << "gl_r suite " << a.size() << " reports, gl_c suite " << c.size() << " reports";
}

}  // namespace

// Optional arguments select criteria by number; default is all of them.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"polar integral formula", criterion_1},   {"equivariance character", criterion_2},
      {"L2 threshold dichotomy", criterion_3},   {"rank-1 Fourier identity", criterion_4},
      {"rank-1 mass and L2 integrals", criterion_5}, {"Cayley identities", criterion_6},
      {"rank-k factorization", criterion_7},     {"certificates and stability", criterion_8},
      {"engine determinism", criterion_9},
  };
  std::vector<bool> selected(criteria.size(), argc < 2);
  for (int a = 1; a < argc; ++a) {
    const int i = std::atoi(argv[a]);
    if (i < 1 || i > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "acceptance: no criterion %s\n", argv[a]);
      return 2;
    }
    selected[i - 1] = true;
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    Outcome o;
    Stopwatch clock;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "[error: " << e.what() << "]";
    }
    if (!o.ok) ++failed;
    std::printf("criterion %zu %s: %s (%.1f s) %s\n", i + 1, criteria[i].first, o.ok ? "PASS" : "FAIL", clock.seconds(),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
