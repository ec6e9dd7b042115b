// jorbit: verification CLI for orbit measures, spherical vectors and Bessel kernels.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jorbit/cayley.hpp"
#include "jorbit/config.hpp"
#include "jorbit/errors.hpp"
#include "jorbit/io.hpp"
#include "jorbit/measures.hpp"
#include "jorbit/rankk.hpp"
#include "jorbit/spherical.hpp"
#include "jorbit/suite.hpp"

namespace {

using namespace jorbit;

constexpr int kErrorExit = 3;

struct QuadFlags {
  int quad_points = QuadratureSpec{}.points_per_axis;
  std::vector<double> truncation_radii = QuadratureSpec{}.truncation_radii;
  std::int64_t mc_samples = QuadratureSpec{}.mc_samples;
  std::string mode = std::string(to_string(QuadratureSpec{}.mode));
  int angle_points = QuadratureSpec{}.angle_points;
  int workers = 0;

  void attach(CLI::App* sub) {
    sub->add_option("--quad-points", quad_points, "Gauss-Legendre nodes per panel");
    sub->add_option("--truncation-radii", truncation_radii, "ascending truncation radii")->delimiter(',');
    sub->add_option("--mc-samples", mc_samples, "Monte Carlo samples");
    sub->add_option("--mode", mode, "deterministic | monte_carlo | hybrid");
    sub->add_option("--angle-points", angle_points, "angle resolution of deterministic M-rules");
    sub->add_option("--workers", workers, "worker threads (0 = all cores)");
  }

  QuadratureSpec spec(std::uint64_t seed) const {
    QuadratureSpec q;
    q.points_per_axis = quad_points;
    q.truncation_radii = truncation_radii;
    q.mc_samples = mc_samples;
    q.seed = seed;
    q.mode = parse_quad_mode(mode);
    q.angle_points = angle_points;
    q.workers = workers;
    q.validate();
    return q;
  }
};

// Options the user did not pass take their value from the config file: the subcommand's
// section first, then [global]. Keys are long option names with '-' replaced by '_'.
void fill_from_config(CLI::App* app, const std::string& section, const Config& config) {
  for (CLI::Option* opt : app->get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty()) continue;
    std::string key = opt->get_lnames().front();
    if (key == "help" || key == "config") continue;
    std::replace(key.begin(), key.end(), '-', '_');
    const auto value = config.lookup(section, key);
    if (!value) continue;
    if (opt->get_type_size_max() > 1 || opt->get_expected_max() > 1) {
      for (double v : parse_double_list(*value)) opt->add_result(CLI::detail::to_string(v));
    } else {
      opt->add_result(*value);
    }
    opt->run_callback();
  }
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jorbit: numerical verification of orbit measures, spherical vectors and Bessel kernels"};
  app.require_subcommand(1);

  std::uint64_t seed = 7;
  std::string config_path;
  std::string format = "json";
  std::string out_path;
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--config", config_path, "sectioned key=value config file");
  app.add_option("--format", format, "json | csv | text")->capture_default_str();
  app.add_option("--out", out_path, "write the document here instead of stdout");

  std::string case_id = "gl_r";
  int n = 2;
  int k = 1;
  std::optional<int> family;
  auto case_opts = [&](CLI::App* sub, bool with_k) {
    sub->add_option("--case", case_id, "case id (see `cases`)")->capture_default_str();
    sub->add_option("--n", n, "Jordan rank")->capture_default_str();
    sub->add_option("--family-parameter", family, "p for the parametric families");
    if (with_k) sub->add_option("--k", k, "orbit rank")->capture_default_str();
    sub->fallthrough();
  };

  QuadFlags quad;

  auto* cases = app.add_subcommand("cases", "list the group table");
  int cases_rank = 2;
  cases->add_option("--n", cases_rank, "rank for families with free rank")->capture_default_str();
  cases->fallthrough();

  auto* polar = app.add_subcommand("verify-polar", "polar integration formula against direct integration");
  case_opts(polar, true);
  quad.attach(polar);
  double polar_tol = 1e-3;
  polar->add_option("--tolerance", polar_tol)->capture_default_str();

  auto* equi = app.add_subcommand("verify-equivariance", "pushforward ratio against the character of nu");
  case_opts(equi, true);
  quad.attach(equi);
  std::string levi_literal;
  std::string levi_b_literal;
  int random_levis = 0;
  bool lebesgue = false;
  double equi_tol = 0.02;
  equi->add_option("--levi", levi_literal, "matrix literal for a (or l); default diag(2, 1, ..., 1)");
  equi->add_option("--levi-b", levi_b_literal, "matrix literal for b on full models; default identity");
  equi->add_option("--random", random_levis, "additional random Levi elements")->capture_default_str();
  equi->add_flag("--lebesgue", lebesgue, "use Lebesgue measure (k = n)");
  equi->add_option("--tolerance", equi_tol)->capture_default_str();

  auto* scan = app.add_subcommand("phi-l2-scan", "square integrability of Phi_t on nested truncations");
  case_opts(scan, false);
  quad.attach(scan);
  double t = -2.0;
  scan->add_option("--t", t, "exponent t")->capture_default_str();

  auto* bessel = app.add_subcommand("bessel-selftest", "K-Bessel identities and transforms");
  bessel->fallthrough();

  auto* r1 = app.add_subcommand("rank1-fourier", "Fourier transform of the rank-one kernel against Phi_{-d}");
  case_opts(r1, false);
  quad.attach(r1);
  std::vector<std::string> x_literals;
  double r1_tol = 0.02;
  r1->add_option("--x", x_literals, "matrix literal(s); default test points");
  r1->add_option("--tolerance", r1_tol)->capture_default_str();

  auto* rk = app.add_subcommand("rankk-fourier", "sum-of-rank-one sampling against rank1_fourier^k");
  case_opts(rk, true);
  quad.attach(rk);
  std::string rk_x;
  std::int64_t rank_draws = 0;
  rk->add_option("--x", rk_x, "matrix literal; default y_1");
  rk->add_option("--rank-draws", rank_draws, "also count orbit-rank violations on this many sums");

  auto* cay = app.add_subcommand("cayley-check", "Cayley operator identities on complex symmetric matrices");
  double cay_s = 3.0;
  int cay_points = 5;
  int cay_n = 2;
  cay->add_option("--s", cay_s, "exponent for the finite-difference check")->capture_default_str();
  cay->add_option("--points", cay_points, "random evaluation points")->capture_default_str();
  cay->add_option("--n", cay_n, "matrix size (1 or 2)")->capture_default_str();
  cay->fallthrough();

  auto* cert = app.add_subcommand("l2-certificate", "exponent bookkeeping for the L^2 statement at rank k < n");
  case_opts(cert, true);
  bool with_integral = false;
  cert->add_flag("--with-integral", with_integral, "also integrate the rank-one kernel squared");
  quad.attach(cert);

  auto* stab = app.add_subcommand("stability-check", "rank-one kernel of the Peirce subalgebra");
  case_opts(stab, true);

  auto* suite = app.add_subcommand("suite", "every check for one case");
  case_opts(suite, false);
  quad.attach(suite);
  SuiteOptions suite_opts;
  suite->add_option("--random-levis", suite_opts.random_levis, "random Levi elements per equivariance check")
      ->capture_default_str();
  suite->add_option("--rank-draws", suite_opts.rank_draws, "sums drawn for the orbit-rank check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kErrorExit;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) {
      const Config config = Config::load(config_path);
      fill_from_config(&app, "global", config);
      fill_from_config(sub, sub->get_name(), config);
    }
    const ReportFormat fmt = parse_report_format(format);

    if (sub == cases) {
      write_output(emit_cases(list_cases(cases_rank), fmt), out_path);
      return 0;
    }

    std::vector<VerificationReport> reports;
    const QuadratureSpec spec = quad.spec(seed);

    if (sub == polar) {
      const CaseDescriptor c = lookup_case(case_id, n, family);
      if (k == c.n) {
        reports.push_back(polar_formula_report(c, spec, polar_tol));
      } else {
        reports.push_back(polar_homogeneity_report(c, k, spec, polar_tol));
      }
    } else if (sub == equi) {
      const CaseDescriptor c = lookup_case(case_id, n, family);
      LeviElement l = scaling_levi(c);
      if (!levi_literal.empty()) {
        const CMatrix a = parse_matrix_literal(levi_literal);
        CMatrix b;
        if (c.model_kind == ModelKind::full_matrix) {
          b = levi_b_literal.empty() ? CMatrix(CMatrix::Identity(a.rows(), a.cols()))
                                     : parse_matrix_literal(levi_b_literal);
        }
        l = make_levi(c, a, b);
      }
      reports.push_back(check_equivariance(c, k, l, spec, equi_tol, gaussian_test_function(), lebesgue));
      Stream rng(seed);
      for (int i = 0; i < random_levis; ++i) {
        reports.push_back(
            check_equivariance(c, k, random_levi(c, rng), spec, equi_tol, gaussian_test_function(), lebesgue));
      }
    } else if (sub == scan) {
      reports.push_back(phi_l2_verdict(SphericalParams{case_id, t}, n, spec));
    } else if (sub == bessel) {
      reports = bessel_selftest();
    } else if (sub == r1) {
      const CaseDescriptor c = lookup_case(case_id, n, family);
      std::vector<AlgebraElement> pts;
      if (x_literals.empty()) {
        pts = fourier_test_points(c);
      } else {
        pts.push_back(zero_element(c));
        for (const auto& lit : x_literals) pts.push_back(parse_element_literal(c, lit));
      }
      reports.push_back(rank1_fourier_identity(c, pts, spec, r1_tol));
    } else if (sub == rk) {
      const CaseDescriptor c = lookup_case(case_id, n, family);
      const AlgebraElement x = rk_x.empty() ? frame(c)[0] : parse_element_literal(c, rk_x);
      reports.push_back(rankk_fourier_report(c, k, x, spec));
      if (rank_draws > 0) reports.push_back(rankk_rank_report(c, k, rank_draws, seed));
    } else if (sub == cay) {
      reports = cayley_check(lookup_case("sp_c", cay_n), cay_s, cay_points, seed);
    } else if (sub == cert) {
      const CaseDescriptor c = lookup_case(case_id, n, family);
      reports.push_back(l2_certificate_report(c, k));
      if (with_integral) reports.push_back(g_l2_rank1(c, spec));
    } else if (sub == stab) {
      reports.push_back(stability_restriction_check(lookup_case(case_id, n, family), k));
    } else if (sub == suite) {
      reports = run_suite(case_id, n, spec, suite_opts, family);
    }

    write_output(emit_report(reports, fmt), out_path);
    return exit_code(reports);
  } catch (const Error& e) {
    std::cerr << "jorbit: " << e.what() << '\n';
    return kErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "jorbit: " << e.what() << '\n';
    return kErrorExit;
  }
}
