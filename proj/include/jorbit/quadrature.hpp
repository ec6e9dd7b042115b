#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "jorbit/errors.hpp"
#include "jorbit/random.hpp"

namespace jorbit {

enum class QuadMode { deterministic, monte_carlo, hybrid };

std::string_view to_string(QuadMode mode);
QuadMode parse_quad_mode(std::string_view text);

struct QuadratureSpec {
  int points_per_axis = 16;  // Gauss-Legendre nodes per panel
  std::vector<double> truncation_radii{4.0, 8.0, 16.0, 32.0};
  std::int64_t mc_samples = 100000;
  std::uint64_t seed = 7;
  QuadMode mode = QuadMode::hybrid;
  int angle_points = 24;  // per-angle resolution of deterministic M-rules
  int workers = 0;        // 0 = hardware concurrency

  /// Throws Error{invalid_argument} unless points_per_axis >= 8 and there are at least two
  /// strictly ascending positive radii.
  void validate() const;
  int resolved_workers() const;
};

struct TracePoint {
  double radius = 0.0;
  double value = 0.0;
  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// A numerical integral. `std_error` is zero exactly when no random sampling contributed.
struct Estimate {
  std::complex<double> value{0.0, 0.0};
  double std_error = 0.0;
  double std_error_imag = 0.0;
  std::int64_t samples_used = 0;
  std::vector<TracePoint> truncation_trace;

  double real() const { return value.real(); }
};

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 2*npoints - 1.
QuadRule gauss_nodes(int npoints, double a = -1.0, double b = 1.0);

/// Breakpoints 0 < 2^-grading < ... < 1/2 < 1 < 2 < 4 < ... covering [0, radius], with every
/// entry of `extra` (e.g. truncation radii) inserted. The last breakpoint is `radius`.
std::vector<double> half_line_breakpoints(double radius, int grading_levels,
                                          std::span<const double> extra = {});

/// Splits every panel wider than `max_width` into equal pieces.
std::vector<double> refine_breakpoints(std::span<const double> breakpoints, double max_width);

/// Composite Gauss-Legendre rule over consecutive breakpoints.
QuadRule composite_rule(std::span<const double> breakpoints, int points_per_panel);

/// Composite Gauss rule whose panel boundaries are returned alongside, for nested traces.
struct PanelRule {
  QuadRule rule;
  std::vector<std::size_t> panel_end;  // rule index one past each panel
  std::vector<double> breakpoints;
};
PanelRule panel_rule(std::span<const double> breakpoints, int points_per_panel);

/// Periodic trapezoid nodes theta_j = 2 pi j / n with equal weights 1/n.
QuadRule periodic_rule(int n);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Work items must be independent.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------------------
// Monte Carlo with batch-means error bars.

inline constexpr int kMcBatches = 32;

struct McOptions {
  std::int64_t samples = 100000;
  std::uint64_t seed = 7;
  double mass = 1.0;  // total mass of the sampling law
  int workers = 1;
};

/// Estimates mass * E[f(X)] where X = sample(stream). Samples are split into 32 batches, batch b
/// drawing from stream.fork(b), so the result is bitwise identical for any worker count.
/// A non-finite integrand value raises Error{poisoned_sample} naming the batch and index.
template <class Sampler, class Integrand>
Estimate mc_integrate(Sampler&& sample, Integrand&& f, const McOptions& opt);

/// Several integrands over one sample stream. `sample(stream, out)` writes one value per
/// output into `out`. Batch means are kept so that ratios of the outputs get error bars
/// that account for the shared samples.
struct McMany {
  std::vector<Estimate> estimates;
  std::vector<std::vector<std::complex<double>>> batch_means;  // [batch][output]
};
template <class Sampler>
McMany mc_integrate_many(std::size_t outputs, Sampler&& sample, const McOptions& opt);

/// Ratio num/den of two outputs of mc_integrate_many, with a batch-means error bar.
struct RatioEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
RatioEstimate mc_ratio(const McMany& mc, std::size_t num, std::size_t den);

// ---------------------------------------------------------------------------------------
// Divergence scans over nested truncations.

enum class ScanVerdict { finite, divergent, inconclusive };
std::string_view to_string(ScanVerdict v);

struct ScanResult {
  ScanVerdict verdict = ScanVerdict::inconclusive;
  std::vector<TracePoint> trace;
  double last_relative_change = 0.0;
  double increment_ratio = 0.0;  // ratio of the last two increments (~2^alpha)
  std::string rationale;
};

/// Classifies a truncation trace I(R_0), I(R_1), ... taken at doubling radii.
///   divergent: relative growth > 10% on each of the last two steps, or the increments stop
///              shrinking (last two increment ratios >= 0.97, the signature of logarithmic
///              growth);
///   finite:    relative change < 1% on the last step and the geometric tail bound of the
///              remaining increments is below 1% of the value;
///   otherwise inconclusive.
ScanResult classify_trace(std::vector<TracePoint> trace);

/// Evaluates `integral_at_radius` at every radius and classifies the trace.
ScanResult divergence_scan(const std::function<double(double)>& integral_at_radius,
                           std::span<const double> radii);

/// Radii 2^lo, ..., 2^hi.
std::vector<double> doubling_radii(int lo_exponent, int hi_exponent);

// ---------------------------------------------------------------------------------------

namespace detail {
struct BatchSums {
  std::complex<double> sum{0.0, 0.0};
  std::int64_t count = 0;
};
Estimate finish_batches(std::span<const BatchSums> batches, double mass);
[[noreturn]] void throw_poisoned(std::size_t batch, std::int64_t index, std::complex<double> v);
}  // namespace detail

template <class Sampler, class Integrand>
Estimate mc_integrate(Sampler&& sample, Integrand&& f, const McOptions& opt) {
  if (opt.samples <= 0) throw Error(ErrorKind::invalid_argument, "mc_integrate needs samples > 0");
  const std::int64_t nb = std::min<std::int64_t>(kMcBatches, opt.samples);
  std::vector<detail::BatchSums> batches(static_cast<std::size_t>(nb));
  const Stream root(opt.seed);
  parallel_for(batches.size(), opt.workers, [&](std::size_t b) {
    const std::int64_t lo = opt.samples * static_cast<std::int64_t>(b) / nb;
    const std::int64_t hi = opt.samples * static_cast<std::int64_t>(b + 1) / nb;
    Stream stream = root.fork(b);
    detail::BatchSums acc;
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::complex<double> v(f(sample(stream)));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) detail::throw_poisoned(b, i, v);
      acc.sum += v;
      ++acc.count;
    }
    batches[b] = acc;
  });
  return detail::finish_batches(batches, opt.mass);
}

template <class Sampler>
McMany mc_integrate_many(std::size_t outputs, Sampler&& sample, const McOptions& opt) {
  if (opt.samples <= 0) throw Error(ErrorKind::invalid_argument, "mc_integrate needs samples > 0");
  const std::int64_t nb = std::min<std::int64_t>(kMcBatches, opt.samples);
  std::vector<std::vector<detail::BatchSums>> sums(static_cast<std::size_t>(nb),
                                                   std::vector<detail::BatchSums>(outputs));
  const Stream root(opt.seed);
  parallel_for(sums.size(), opt.workers, [&](std::size_t b) {
    const std::int64_t lo = opt.samples * static_cast<std::int64_t>(b) / nb;
    const std::int64_t hi = opt.samples * static_cast<std::int64_t>(b + 1) / nb;
    Stream stream = root.fork(b);
    std::vector<std::complex<double>> vals(outputs);
    auto& acc = sums[b];
    for (std::int64_t i = lo; i < hi; ++i) {
      sample(stream, std::span<std::complex<double>>(vals));
      for (std::size_t o = 0; o < outputs; ++o) {
        const auto v = vals[o];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) detail::throw_poisoned(b, i, v);
        acc[o].sum += v;
        ++acc[o].count;
      }
    }
  });
  McMany out;
  out.batch_means.resize(sums.size(), std::vector<std::complex<double>>(outputs));
  std::vector<detail::BatchSums> column(sums.size());
  for (std::size_t o = 0; o < outputs; ++o) {
    for (std::size_t b = 0; b < sums.size(); ++b) {
      column[b] = sums[b][o];
      out.batch_means[b][o] = opt.mass * sums[b][o].sum / static_cast<double>(sums[b][o].count);
    }
    out.estimates.push_back(detail::finish_batches(column, opt.mass));
  }
  return out;
}

}  // namespace jorbit
