#include "jorbit/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jorbit/errors.hpp"
#include "jorbit/measures.hpp"

namespace jorbit {

namespace {

using cd = std::complex<double>;

std::vector<double> radial_breakpoints(double radius, double max_width) {
  auto bp = half_line_breakpoints(radius, 48);
  return refine_breakpoints(bp, max_width);
}

// Transform and truncation trace on a uniform w-grid, read back by 4-point Lagrange
// interpolation. Layout per node: re, im, trace_0, ..., trace_{r-1}.
class TransformTable {
 public:
  TransformTable(const RadialTransform& rt, double wmax, double spacing = 0.005) {
    width_ = 2 + rt.trace(0.0).size();
    h_ = spacing;
    lo_ = -wmax - 2.0 * h_;
    count_ = static_cast<std::size_t>(std::ceil((2.0 * wmax + 4.0 * h_) / h_)) + 1;
    data_.resize(count_ * width_);
    for (std::size_t i = 0; i < count_; ++i) {
      const double w = lo_ + h_ * static_cast<double>(i);
      const cd v = rt(w);
      double* row = &data_[i * width_];
      row[0] = v.real();
      row[1] = v.imag();
      const auto tr = rt.trace(w);
      for (std::size_t r = 0; r < tr.size(); ++r) row[2 + r] = tr[r].value;
    }
  }

  void lookup(double w, std::span<cd> out) const {
    const double u = (w - lo_) / h_;
    auto i = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(count_) - 4);
    const double t = u - static_cast<double>(i);  // nodes at t = 0, 1, 2, 3
    const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    const double* r0 = &data_[static_cast<std::size_t>(i) * width_];
    auto at = [&](std::size_t col) {
      return l0 * r0[col] + l1 * r0[width_ + col] + l2 * r0[2 * width_ + col] + l3 * r0[3 * width_ + col];
    };
    out[0] = cd(at(0), at(1));
    for (std::size_t col = 2; col < width_; ++col) out[col - 1] = at(col);
  }

 private:
  std::size_t width_ = 0;
  std::size_t count_ = 0;
  double h_ = 0.0;
  double lo_ = 0.0;
  std::vector<double> data_;
};

}  // namespace

BesselKernel bessel_kernel(const CaseDescriptor& c) { return BesselKernel{bessel_parameter(c), c.case_id}; }

double phi_t_spectral(double t, std::span<const double> z) {
  double acc = 0.0;
  for (double zi : z) acc += std::log1p(zi * zi);
  return std::exp(0.5 * t * acc);
}

double phi_t(double t, const AlgebraElement& x) {
  const Eigen::VectorXd s = singular_spectrum(x);
  return phi_t_spectral(t, std::span<const double>(s.data(), static_cast<std::size_t>(s.size())));
}

double phi_t(const SphericalParams& p, const AlgebraElement& x) {
  if (p.case_id != x.case_id) throw Error(ErrorKind::case_mismatch, "spherical parameters for another case");
  return phi_t(p.t, x);
}

VerificationReport phi_power_identity(const CaseDescriptor& c, int k, std::span<const AlgebraElement> points,
                                      double tolerance) {
  Stopwatch clock;
  if (k < 1 || k > c.n) throw Error(ErrorKind::out_of_range, "phi_power_identity: k outside [1, n]");
  double worst = 0.0;
  for (const auto& x : points) {
    const double lhs = phi_t(-static_cast<double>(c.d) * k, x);
    const double rhs = std::pow(phi_t(-static_cast<double>(c.d), x), k);
    worst = std::max(worst, std::abs(lhs / rhs - 1.0));
  }
  VerificationReport r;
  r.claim_id = "phi-power";
  r.case_id = c.case_id;
  r.param("n", std::int64_t{c.n}).param("k", std::int64_t{k}).param("points", static_cast<std::int64_t>(points.size()));
  r.predicted = 0.0;
  r.measured = worst;
  r.tolerance = tolerance;
  r.verdict = worst <= tolerance ? Verdict::pass : Verdict::fail;
  r.anchor = "Phi_{-dk} = (Phi_{-d})^k";
  r.notes = "measured is the largest relative deviation";
  r.runtime_seconds = clock.seconds();
  return r;
}

VerificationReport phi_power_identity_random(const CaseDescriptor& c, int k, int count, std::uint64_t seed,
                                             double tolerance) {
  Stream rng(seed);
  std::vector<AlgebraElement> pts;
  const int s = c.matrix_size();
  for (int i = 0; i < count; ++i) {
    const double scale = std::exp(2.0 * rng.uniform() - 1.0);
    CMatrix m(s, s);
    for (int col = 0; col < s; ++col)
      for (int row = 0; row < s; ++row) m(row, col) = scale * cd(rng.normal(), rng.normal());
    pts.push_back(make_element(c, m));
  }
  auto r = phi_power_identity(c, k, pts, tolerance);
  r.seed = seed;
  return r;
}

bool phi_l2_predicted_finite(const CaseDescriptor& c, double t) {
  return 2.0 * t + c.e + 2.0 * c.d * (c.n - 1) + 1.0 < 0.0;
}

std::vector<double> default_l2_scan_radii() { return doubling_radii(1, 48); }

ScanResult phi_l2_scan(const CaseDescriptor& c, double t, const QuadratureSpec& quad, std::span<const double> radii) {
  QuadratureSpec q = quad;
  q.truncation_radii = radii.empty() ? default_l2_scan_radii() : std::vector<double>(radii.begin(), radii.end());
  if (q.mode == QuadMode::monte_carlo) q.mode = QuadMode::hybrid;
  q.points_per_axis = 8;  // (1+z^2)^t is smooth on dyadic panels
  Integrand f;
  f.spectral_fn = [t](std::span<const double> z) { return phi_t_spectral(2.0 * t, z); };
  const Estimate e = integrate_polar(c, c.n, f, q);
  return classify_trace(e.truncation_trace);
}

VerificationReport phi_l2_verdict(const SphericalParams& p, int n, const QuadratureSpec& quad,
                                  std::span<const double> radii) {
  Stopwatch clock;
  const CaseDescriptor c = lookup_case(p.case_id, n);
  require_backend(c);
  const bool finite = phi_l2_predicted_finite(c, p.t);
  const ScanResult scan = phi_l2_scan(c, p.t, quad, radii);
  VerificationReport r;
  r.claim_id = "phi-l2-threshold";
  r.case_id = c.case_id;
  r.param("n", std::int64_t{c.n})
      .param("t", p.t)
      .param("threshold", l2_threshold(c))
      .param("radii", static_cast<std::int64_t>(scan.trace.size()))
      .param("r_max", scan.trace.empty() ? 0.0 : scan.trace.back().radius)
      .param("last_value", scan.trace.empty() ? 0.0 : scan.trace.back().value)
      .param("increment_ratio", scan.increment_ratio);
  r.predicted = std::string(finite ? "finite" : "divergent");
  r.measured = std::string(to_string(scan.verdict));
  r.seed = quad.seed;
  if (scan.verdict == ScanVerdict::inconclusive) {
    r.verdict = Verdict::inconclusive;
  } else {
    r.verdict = (scan.verdict == ScanVerdict::finite) == finite ? Verdict::pass : Verdict::fail;
  }
  r.anchor = "Phi_t is square integrable iff 2t + e + 2d(n-1) < -1";
  r.notes = scan.rationale;
  r.runtime_seconds = clock.seconds();
  return r;
}

double bessel_k(double tau, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw Error(ErrorKind::out_of_range, "bessel_k needs z > 0");
  const double a = std::abs(tau);
  constexpr double h = 0.1;
  // e^{-z} pulled out: integrand exp(-z (cosh u - 1)) cosh(tau u).
  auto log_term = [&](double u) {
    const double c1 = u < 1e-3 ? 0.5 * u * u * (1.0 + u * u / 12.0) : std::cosh(u) - 1.0;
    return -z * c1 + a * u + std::log1p(std::exp(-2.0 * a * u)) - std::numbers::ln2;
  };
  double sum = 0.5 * std::exp(log_term(0.0));
  double prev = sum;
  for (int j = 1; j < 100000; ++j) {
    const double term = std::exp(log_term(j * h));
    sum += term;
    if (term < 1e-18 * sum && term <= prev) break;
    prev = term;
  }
  return h * sum * std::exp(-z);
}

double upsilon(double tau, double z) { return bessel_k(tau, z) / std::pow(z, tau); }

double upsilon(const BesselKernel& kernel, double z) { return upsilon(kernel.tau, z); }

double bessel_mellin(double nu, double s) {
  return std::pow(2.0, s - 2.0) * std::tgamma(0.5 * (s - nu)) * std::tgamma(0.5 * (s + nu));
}

QuadRule radial_rule(double radius, int points_per_panel, double max_width) {
  return composite_rule(radial_breakpoints(radius, max_width), points_per_panel);
}

Estimate rank1_mass(const CaseDescriptor& c, int points_per_panel) {
  const double tau = bessel_parameter(c);
  const double p = c.d * c.n - 1.0;
  const std::vector<double> radii{16.0, 32.0, 64.0, 128.0};
  auto bp = radial_breakpoints(radii.back(), 4.0);
  const PanelRule pr = panel_rule(bp, points_per_panel);
  Estimate e;
  double acc = 0.0;
  std::size_t start = 0;
  std::size_t next_radius = 0;
  for (std::size_t panel = 0; panel < pr.panel_end.size(); ++panel) {
    for (std::size_t i = start; i < pr.panel_end[panel]; ++i) {
      const double z = pr.rule.nodes[i];
      acc += pr.rule.weights[i] * upsilon(tau, z) * std::pow(z, p);
    }
    start = pr.panel_end[panel];
    const double right = pr.breakpoints[panel + 1];
    while (next_radius < radii.size() && right >= radii[next_radius]) {
      e.truncation_trace.push_back({radii[next_radius], acc});
      ++next_radius;
    }
  }
  e.value = acc;
  e.samples_used = static_cast<std::int64_t>(pr.rule.size());
  return e;
}

double rank1_mass_closed_form(const CaseDescriptor& c) {
  const double tau = bessel_parameter(c);
  return bessel_mellin(tau, c.d * c.n - tau);
}

RadialTransform::RadialTransform(double tau, double power, double max_frequency, int points_per_panel,
                                 std::vector<double> radii)
    : radii_(std::move(radii)) {
  if (radii_.empty()) throw Error(ErrorKind::invalid_argument, "RadialTransform needs truncation radii");
  std::sort(radii_.begin(), radii_.end());
  const double width = max_frequency > 1.0 ? std::min(4.0, std::numbers::pi / max_frequency) : 4.0;
  auto bp = half_line_breakpoints(radii_.back(), 48, radii_);
  bp = refine_breakpoints(bp, width);
  const QuadRule rule = composite_rule(bp, points_per_panel);
  z_ = rule.nodes;
  g_.resize(z_.size());
  for (std::size_t i = 0; i < z_.size(); ++i) g_[i] = rule.weights[i] * upsilon(tau, z_[i]) * std::pow(z_[i], power);
  for (double r : radii_) {
    cut_.push_back(static_cast<std::size_t>(std::upper_bound(z_.begin(), z_.end(), r) - z_.begin()));
  }
}

cd RadialTransform::operator()(double w) const {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const double ph = z_[i] * w;
    re += g_[i] * std::cos(ph);
    im -= g_[i] * std::sin(ph);
  }
  return {re, im};
}

std::vector<TracePoint> RadialTransform::trace(double w) const {
  std::vector<TracePoint> out;
  double re = 0.0;
  std::size_t i = 0;
  for (std::size_t r = 0; r < radii_.size(); ++r) {
    for (; i < cut_[r]; ++i) re += g_[i] * std::cos(z_[i] * w);
    out.push_back({radii_[r], re});
  }
  return out;
}

double k0_cosine_transform(double x) {
  const RadialTransform rt(0.0, 0.0, std::abs(x));
  return rt(x).real();
}

bool trace_converged(const Estimate& e, double tol) {
  const auto& t = e.truncation_trace;
  if (t.size() < 2) return false;
  const double a = t[t.size() - 1].value;
  const double b = t[t.size() - 2].value;
  return std::abs(a - b) <= tol * std::max(std::abs(a), 1e-300);
}

Estimate rank1_fourier(const CaseDescriptor& c, const AlgebraElement& x, const QuadratureSpec& quad) {
  require_backend(c);
  if (x.case_id != c.case_id) throw Error(ErrorKind::case_mismatch, "rank1_fourier: element of another case");
  quad.validate();
  const double tau = bessel_parameter(c);
  const double power = c.d * c.n - 1.0;
  const double scale = pairing_scale(c);
  const auto frames = frame(c);
  const double wmax = scale * std::sqrt(frobenius_norm2(x) * frobenius_norm2(frames[0]));
  const RadialTransform rt(tau, power, wmax, quad.points_per_axis);
  auto pair_with = [&](const CMatrix& y) { return scale * (x.entries.array() * y.conjugate().array()).real().sum(); };

  std::optional<std::vector<MNode>> rule;
  if (wmax == 0.0 && quad.mode != QuadMode::monte_carlo) {
    rule = std::vector<MNode>{MNode{CMatrix(), CMatrix(), 1.0}};
  } else if (quad.mode == QuadMode::hybrid && c.case_id == "gl_r" && c.n == 2) {
    rule = deterministic_m_rule(c, quad.angle_points);
  } else if (quad.mode == QuadMode::deterministic) {
    rule = deterministic_m_rule(c, quad.angle_points);
    if (!rule) throw Error(ErrorKind::capability, "no deterministic M-rule for case " + c.case_id);
  }

  Estimate est;
  if (rule) {
    cd acc{0.0, 0.0};
    std::vector<double> trace(4, 0.0);
    std::vector<double> radii;
    for (const auto& node : *rule) {
      double w = 0.0;
      if (node.a.size() != 0) {
        CMatrix y;
        levi_apply(c.model_kind, node.a, node.b, frames[0].entries, y);
        w = pair_with(y);
      }
      acc += node.weight * rt(w);
      const auto tr = rt.trace(w);
      trace.resize(tr.size(), 0.0);
      radii.clear();
      for (std::size_t i = 0; i < tr.size(); ++i) {
        trace[i] += node.weight * tr[i].value;
        radii.push_back(tr[i].radius);
      }
    }
    est.value = acc;
    for (std::size_t i = 0; i < radii.size(); ++i) est.truncation_trace.push_back({radii[i], trace[i]});
    est.samples_used = static_cast<std::int64_t>(rule->size());
    return est;
  }

  const std::size_t nr = rt.trace(0.0).size();
  const TransformTable table(rt, wmax);
  auto sample = [&](Stream& rng, std::span<cd> out) {
    CMatrix y(c.matrix_size(), c.matrix_size());
    random_rank1_direction_into(c, rng, y);
    table.lookup(pair_with(y), out);
  };
  const McMany mc =
      mc_integrate_many(1 + nr, sample, McOptions{quad.mc_samples, quad.seed, 1.0, quad.resolved_workers()});
  est = mc.estimates[0];
  est.truncation_trace.clear();
  const auto radii = rt.trace(0.0);
  for (std::size_t i = 0; i < nr; ++i) est.truncation_trace.push_back({radii[i].radius, mc.estimates[1 + i].real()});
  return est;
}

VerificationReport rank1_fourier_identity(const CaseDescriptor& c, std::span<const AlgebraElement> points,
                                          const QuadratureSpec& quad, double tolerance) {
  Stopwatch clock;
  if (points.empty()) throw Error(ErrorKind::invalid_argument, "rank1_fourier_identity needs points");
  VerificationReport r;
  r.claim_id = "rank1-fourier";
  r.case_id = c.case_id;
  r.param("n", std::int64_t{c.n}).param("points", static_cast<std::int64_t>(points.size()));
  double base = 0.0;
  double worst = 0.0;
  double worst_ratio = 0.0;
  double se = 0.0;
  bool converged = true;
  bool positive = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Estimate e = rank1_fourier(c, points[i], quad);
    const double phi = phi_t(-static_cast<double>(c.d), points[i]);
    const double ratio = e.real() / phi;
    converged = converged && trace_converged(e, 1e-6);
    const double im_bound = std::max(3.0 * e.std_error_imag, 1e-9 * std::abs(e.real()));
    positive = positive && e.real() > 0.0 && std::abs(e.value.imag()) <= im_bound;
    se = std::max(se, e.std_error / phi);
    r.param("ratio_" + std::to_string(i), ratio);
    if (i == 0) {
      base = ratio;
      worst_ratio = ratio;
    } else if (std::abs(ratio / base - 1.0) > worst) {
      worst = std::abs(ratio / base - 1.0);
      worst_ratio = ratio;
    }
  }
  r.predicted = base;
  r.measured = worst_ratio;
  r.tolerance = tolerance;
  if (se > 0.0) r.std_error = se;
  r.seed = quad.seed;
  if (!converged) {
    r.verdict = Verdict::inconclusive;
    r.notes = "z-truncation trace did not settle";
  } else {
    r.verdict = (worst <= tolerance && positive) ? Verdict::pass : Verdict::fail;
    if (!positive) r.notes = "transform not real and positive at every point";
  }
  r.anchor = "the Fourier transform of upsilon dmu_1 is a multiple of Phi_{-d} dlambda";
  r.runtime_seconds = clock.seconds();
  return r;
}

std::vector<VerificationReport> bessel_selftest() {
  std::vector<VerificationReport> out;
  auto make = [&](std::string check, double predicted, double measured, double tol, Verdict v) {
    VerificationReport r;
    r.claim_id = "bessel-selftest";
    r.case_id = "-";
    r.param("check", std::move(check));
    r.predicted = predicted;
    r.measured = measured;
    r.tolerance = tol;
    r.verdict = v;
    out.push_back(std::move(r));
  };
  {
    const double exact = std::sqrt(std::numbers::pi / 2.0) * std::exp(-1.0);
    const double k = bessel_k(0.5, 1.0);
    make("half-integer closed form", exact, k, 1e-10, scalar_verdict(exact, k, 1e-10));
  }
  {
    Stream rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double tau = 10.0 * rng.uniform() - 5.0;
      const double z = std::exp(std::log(1e-3) + rng.uniform() * std::log(5e4));
      worst = std::max(worst, std::abs(bessel_k(-tau, z) / bessel_k(tau, z) - 1.0));
    }
    make("reflection K_{-tau} = K_tau", 0.0, worst, 1e-9, worst <= 1e-9 ? Verdict::pass : Verdict::fail);
  }
  {
    double worst = 0.0;
    for (double tau : {-3.5, -1.0, -0.5, 0.0, 0.3, 1.0, 2.5, 4.0}) {
      for (double z : {1e-3, 0.05, 0.5, 1.0, 3.0, 10.0, 30.0}) {
        const double lhs = bessel_k(tau + 1.0, z) - bessel_k(tau - 1.0, z);
        const double rhs = 2.0 * tau / z * bessel_k(tau, z);
        const double scale = bessel_k(tau + 1.0, z) + bessel_k(tau - 1.0, z);
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
      }
    }
    make("recurrence", 0.0, worst, 1e-9, worst <= 1e-9 ? Verdict::pass : Verdict::fail);
  }
  {
    const double z = 1e-4;
    const double approx = -std::log(z / 2.0) - std::numbers::egamma;
    const double v = upsilon(0.0, z);
    make("small-z logarithm", approx, v, 0.01, scalar_verdict(approx, v, 0.01));
  }
  {
    const double approx = std::exp(-10.0) * std::sqrt(10.0 / 20.0);
    const double v = upsilon(0.0, 20.0) / upsilon(0.0, 10.0);
    make("exponential decay", approx, v, 0.05, scalar_verdict(approx, v, 0.05));
  }
  for (double x : {0.0, 1.0, 5.0}) {
    const double exact = 0.5 * std::numbers::pi / std::sqrt(1.0 + x * x);
    const double v = k0_cosine_transform(x);
    make("K_0 cosine transform at x=" + std::to_string(static_cast<int>(x)), exact, v, 1e-6,
         std::abs(v - exact) <= 1e-6 ? Verdict::pass : Verdict::fail);
  }
  for (auto& r : out) r.anchor = "one-variable K-Bessel function";
  return out;
}

VerificationReport rank1_mass_report(const CaseDescriptor& c, double tolerance) {
  Stopwatch clock;
  const Estimate e = rank1_mass(c);
  const double exact = rank1_mass_closed_form(c);
  VerificationReport r;
  r.claim_id = "rank1-mass";
  r.case_id = c.case_id;
  r.param("n", std::int64_t{c.n}).param("tau", bessel_parameter(c)).param("power", c.d * c.n - 1.0);
  r.predicted = exact;
  r.measured = e.real();
  r.tolerance = tolerance;
  const ScanResult scan = classify_trace(e.truncation_trace);
  r.verdict = scan.verdict == ScanVerdict::finite ? scalar_verdict(exact, e.real(), tolerance) : Verdict::fail;
  r.anchor = "the L^1 mass of the rank-one kernel is finite";
  r.notes = "closed form from the Mellin transform of K_tau";
  r.runtime_seconds = clock.seconds();
  return r;
}

}  // namespace jorbit
