#include "jorbit/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <numbers>
#include <sstream>

namespace jorbit {

std::string_view to_string(QuadMode mode) {
  switch (mode) {
    case QuadMode::deterministic: return "deterministic";
    case QuadMode::monte_carlo: return "monte_carlo";
    case QuadMode::hybrid: return "hybrid";
  }
  return "hybrid";
}

QuadMode parse_quad_mode(std::string_view text) {
  if (text == "deterministic") return QuadMode::deterministic;
  if (text == "monte_carlo" || text == "mc") return QuadMode::monte_carlo;
  if (text == "hybrid") return QuadMode::hybrid;
  throw Error(ErrorKind::parse, "unknown quadrature mode '" + std::string(text) + "'");
}

void QuadratureSpec::validate() const {
  if (points_per_axis < 8) throw Error(ErrorKind::invalid_argument, "points_per_axis must be >= 8");
  if (truncation_radii.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "need at least two truncation radii");
  }
  for (std::size_t i = 0; i < truncation_radii.size(); ++i) {
    if (!(truncation_radii[i] > 0.0) || (i > 0 && !(truncation_radii[i] > truncation_radii[i - 1]))) {
      throw Error(ErrorKind::invalid_argument, "truncation radii must be positive and ascending");
    }
  }
  if (mc_samples <= 0) throw Error(ErrorKind::invalid_argument, "mc_samples must be positive");
  if (angle_points < 4) throw Error(ErrorKind::invalid_argument, "angle_points must be >= 4");
}

int QuadratureSpec::resolved_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

QuadRule gauss_nodes(int npoints, double a, double b) {
  if (npoints < 1) throw Error(ErrorKind::invalid_argument, "gauss_nodes needs npoints >= 1");
  QuadRule rule;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  const int half = (npoints + 1) / 2;
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess followed by Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= npoints; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (npoints == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = npoints * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= npoints; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = npoints == 1 ? 1.0 : npoints * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - hw * x;
    rule.nodes[npoints - 1 - i] = mid + hw * x;
    rule.weights[i] = hw * w;
    rule.weights[npoints - 1 - i] = hw * w;
  }
  if (npoints == 1) {
    rule.nodes[0] = mid;
    rule.weights[0] = b - a;
  }
  return rule;
}

std::vector<double> half_line_breakpoints(double radius, int grading_levels, std::span<const double> extra) {
  if (!(radius > 0.0)) throw Error(ErrorKind::invalid_argument, "radius must be positive");
  std::vector<double> bp{0.0};
  for (int j = grading_levels; j >= 1; --j) bp.push_back(std::ldexp(1.0, -j));
  for (double x = 1.0; x < radius; x *= 2.0) bp.push_back(x);
  for (double x : extra) {
    if (x > 0.0 && x < radius) bp.push_back(x);
  }
  bp.push_back(radius);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::remove_if(bp.begin(), bp.end(), [&](double x) { return x > radius; }), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

std::vector<double> refine_breakpoints(std::span<const double> breakpoints, double max_width) {
  std::vector<double> out;
  if (breakpoints.empty()) return out;
  out.push_back(breakpoints.front());
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const double a = breakpoints[i - 1];
    const double b = breakpoints[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width - 1e-12)));
    for (int p = 1; p < pieces; ++p) out.push_back(a + (b - a) * p / pieces);
    out.push_back(b);
  }
  return out;
}

PanelRule panel_rule(std::span<const double> breakpoints, int points_per_panel) {
  PanelRule pr;
  pr.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  const QuadRule ref = gauss_nodes(points_per_panel);
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const double a = breakpoints[i - 1];
    const double b = breakpoints[i];
    if (b > a) {
      const double mid = 0.5 * (a + b);
      const double hw = 0.5 * (b - a);
      for (std::size_t j = 0; j < ref.size(); ++j) {
        pr.rule.nodes.push_back(mid + hw * ref.nodes[j]);
        pr.rule.weights.push_back(hw * ref.weights[j]);
      }
    }
    pr.panel_end.push_back(pr.rule.size());
  }
  return pr;
}

QuadRule composite_rule(std::span<const double> breakpoints, int points_per_panel) {
  return panel_rule(breakpoints, points_per_panel).rule;
}

QuadRule periodic_rule(int n) {
  QuadRule rule;
  for (int j = 0; j < n; ++j) {
    rule.nodes.push_back(2.0 * std::numbers::pi * j / n);
    rule.weights.push_back(1.0 / n);
  }
  return rule;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t nw = std::min<std::size_t>(std::max(1, workers), count);
  if (nw <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

namespace detail {

Estimate finish_batches(std::span<const BatchSums> batches, double mass) {
  Estimate est;
  std::complex<double> total{0.0, 0.0};
  std::int64_t n = 0;
  for (const auto& b : batches) {
    total += b.sum;
    n += b.count;
  }
  const std::complex<double> mean = total / static_cast<double>(n);
  double var_re = 0.0;
  double var_im = 0.0;
  const double nb = static_cast<double>(batches.size());
  for (const auto& b : batches) {
    const std::complex<double> bm = b.sum / static_cast<double>(b.count);
    var_re += (bm.real() - mean.real()) * (bm.real() - mean.real());
    var_im += (bm.imag() - mean.imag()) * (bm.imag() - mean.imag());
  }
  if (nb > 1) {
    var_re /= nb * (nb - 1.0);
    var_im /= nb * (nb - 1.0);
  }
  est.value = mass * mean;
  est.std_error = std::abs(mass) * std::sqrt(var_re);
  est.std_error_imag = std::abs(mass) * std::sqrt(var_im);
  est.samples_used = n;
  est.truncation_trace.push_back({0.0, est.value.real()});
  return est;
}

void throw_poisoned(std::size_t batch, std::int64_t index, std::complex<double> v) {
  std::ostringstream os;
  os << "non-finite integrand value (" << v.real() << ", " << v.imag() << ") at batch " << batch
     << ", sample " << index;
  throw Error(ErrorKind::poisoned_sample, os.str());
}

}  // namespace detail

RatioEstimate mc_ratio(const McMany& mc, std::size_t num, std::size_t den) {
  RatioEstimate r;
  const double a = mc.estimates.at(num).value.real();
  const double b = mc.estimates.at(den).value.real();
  if (b == 0.0) throw Error(ErrorKind::singular, "mc_ratio: zero denominator");
  r.value = a / b;
  // Linearized batch ratios: (a_b - r b_b) / b.
  const std::size_t nb = mc.batch_means.size();
  if (nb < 2) return r;
  double var = 0.0;
  for (const auto& bm : mc.batch_means) {
    const double dev = (bm[num].real() - r.value * bm[den].real()) / b;
    var += dev * dev;
  }
  r.std_error = std::sqrt(var / (static_cast<double>(nb) * (nb - 1.0)));
  return r;
}

std::string_view to_string(ScanVerdict v) {
  switch (v) {
    case ScanVerdict::finite: return "finite";
    case ScanVerdict::divergent: return "divergent";
    case ScanVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ScanResult classify_trace(std::vector<TracePoint> trace) {
  ScanResult res;
  res.trace = std::move(trace);
  const auto& t = res.trace;
  if (t.size() < 2) {
    res.rationale = "fewer than two truncation radii";
    return res;
  }
  const std::size_t m = t.size();
  auto rel = [&](std::size_t i) {
    const double denom = std::max(std::abs(t[i - 1].value), 1e-300);
    return (t[i].value - t[i - 1].value) / denom;
  };
  const double scale = std::max(std::abs(t[m - 1].value), 1e-300);
  res.last_relative_change = std::abs(t[m - 1].value - t[m - 2].value) / scale;

  std::vector<double> inc;
  for (std::size_t i = 1; i < m; ++i) inc.push_back(t[i].value - t[i - 1].value);
  // Increments at round-off level carry no rate information.
  auto negligible = [&](double d) { return std::abs(d) <= 1e-13 * scale; };

  bool fast_growth = m >= 3 && rel(m - 1) > 0.10 && rel(m - 2) > 0.10;
  if (m == 2) fast_growth = rel(1) > 0.10 && res.last_relative_change > 0.10;

  bool stalled_decay = false;
  if (inc.size() >= 3) {
    const double a = inc[inc.size() - 3];
    const double b = inc[inc.size() - 2];
    const double c = inc[inc.size() - 1];
    if (a > 0 && b > 0 && c > 0 && !negligible(c)) {
      const double q1 = b / a;
      const double q2 = c / b;
      res.increment_ratio = q2;
      stalled_decay = q1 >= 0.97 && q2 >= 0.97;
    }
  }
  if (inc.size() >= 2 && res.increment_ratio == 0.0) {
    const double b = inc[inc.size() - 2];
    const double c = inc[inc.size() - 1];
    if (!negligible(b)) res.increment_ratio = c / b;
  }

  if (fast_growth || stalled_decay) {
    res.verdict = ScanVerdict::divergent;
    std::ostringstream os;
    os << (fast_growth ? "relative growth > 10% per doubling" : "increments not decaying (ratio >= 0.97)")
       << "; last increment ratio " << res.increment_ratio;
    res.rationale = os.str();
    return res;
  }

  const double last = inc.back();
  double tail = 0.0;
  if (!negligible(last)) {
    const double q = std::abs(res.increment_ratio);
    tail = (q > 0.0 && q < 0.97) ? std::abs(last) * q / (1.0 - q) : std::numeric_limits<double>::infinity();
  }
  if (res.last_relative_change < 0.01 && tail < 0.01 * scale) {
    res.verdict = ScanVerdict::finite;
    std::ostringstream os;
    os << "last relative change " << res.last_relative_change << ", tail bound " << tail / scale;
    res.rationale = os.str();
    return res;
  }
  res.verdict = ScanVerdict::inconclusive;
  std::ostringstream os;
  os << "neither convergent nor growing: last relative change " << res.last_relative_change
     << ", increment ratio " << res.increment_ratio;
  res.rationale = os.str();
  return res;
}

ScanResult divergence_scan(const std::function<double(double)>& integral_at_radius,
                           std::span<const double> radii) {
  if (radii.size() < 2) throw Error(ErrorKind::invalid_argument, "divergence_scan needs >= 2 radii");
  std::vector<TracePoint> trace;
  trace.reserve(radii.size());
  for (double r : radii) trace.push_back({r, integral_at_radius(r)});
  return classify_trace(std::move(trace));
}

std::vector<double> doubling_radii(int lo_exponent, int hi_exponent) {
  std::vector<double> r;
  for (int j = lo_exponent; j <= hi_exponent; ++j) r.push_back(std::ldexp(1.0, j));
  return r;
}

}  // namespace jorbit
