#include "jorbit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jorbit/errors.hpp"
#include "jorbit/linalg.hpp"

namespace jorbit {

namespace {

using cd = std::complex<double>;

DensityValue log_density(std::span<const double> z, double p_exponent, double v_exponent) {
  DensityValue dv;
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > 0.0) || !std::isfinite(z[i])) return dv;
    acc += p_exponent * std::log(z[i]);
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const double diff = (z[i] - z[j]) * (z[i] + z[j]);
      if (!(diff > 0.0)) {
        if (v_exponent == 0.0) continue;
        return dv;
      }
      acc += v_exponent * std::log(diff);
    }
  }
  dv.log_value = acc;
  dv.boundary = false;
  return dv;
}

void check_k(const CaseDescriptor& c, int k) {
  if (k < 1 || k > c.n) throw Error(ErrorKind::out_of_range, "k must lie in [1, n]");
}

struct ConeNodes {
  int k = 0;
  std::vector<double> z;  // k entries per node
  std::vector<double> w;  // Gauss weight times density
  std::vector<double> z1;
};

using ConeVisitor = std::function<void(std::span<const double>, double)>;

// Nested ordered-cone rule: z_1 on dyadic panels up to the last radius (every radius is a
// breakpoint), z_{i+1} in [0, z_i] on dyadic panels. Nodes arrive with z_1 nondecreasing.
void visit_nested(int depth, int k, double upper, int grading, std::vector<double>& prefix, double w,
                  const QuadRule& ref, const std::function<double(std::span<const double>)>& dens,
                  const ConeVisitor& visit, std::span<const double> extra) {
  const auto bp = half_line_breakpoints(upper, grading, extra);
  for (std::size_t p = 1; p < bp.size(); ++p) {
    const double a = bp[p - 1];
    const double b = bp[p];
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      prefix[depth] = mid + hw * ref.nodes[j];
      const double wj = w * hw * ref.weights[j];
      if (depth + 1 == k) {
        const double dv = dens(prefix);
        if (dv != 0.0) visit(prefix, wj * dv);
      } else {
        visit_nested(depth + 1, k, prefix[depth], grading, prefix, wj, ref, dens, visit, {});
      }
    }
  }
}

void visit_cone(int k, const std::vector<double>& radii, int ppp, int grading,
                const std::function<double(std::span<const double>)>& dens, const ConeVisitor& visit) {
  const QuadRule ref = gauss_nodes(ppp);
  std::vector<double> prefix(static_cast<std::size_t>(k));
  visit_nested(0, k, radii.back(), grading, prefix, 1.0, ref, dens, visit, radii);
}

ConeNodes build_cone(int k, const std::vector<double>& radii, int ppp, int grading,
                     const std::function<double(std::span<const double>)>& dens) {
  ConeNodes out;
  out.k = k;
  visit_cone(k, radii, ppp, grading, dens, [&](std::span<const double> z, double w) {
    out.z.insert(out.z.end(), z.begin(), z.end());
    out.w.push_back(w);
    out.z1.push_back(z[0]);
  });
  return out;
}

std::vector<std::size_t> radius_cutoffs(const ConeNodes& nodes, const std::vector<double>& radii) {
  std::vector<std::size_t> cut;
  for (double r : radii) {
    cut.push_back(static_cast<std::size_t>(std::upper_bound(nodes.z1.begin(), nodes.z1.end(), r) - nodes.z1.begin()));
  }
  return cut;
}

CMatrix rotation(double theta, double reflect) {
  CMatrix r(2, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  r << c, -s * reflect, s, c * reflect;
  return r;
}

std::function<double(std::span<const double>)> density_fn(const CaseDescriptor& c, int k, PolarMeasure measure) {
  if (k == c.n && measure == PolarMeasure::lebesgue) {
    return [c](std::span<const double> z) { return open_density_raw(c, z).value(); };
  }
  return [c, k](std::span<const double> z) { return rank_k_density_raw(c, k, z).value(); };
}

std::function<double(std::span<const double>)> log_density_fn(const CaseDescriptor& c, int k, PolarMeasure measure) {
  if (k == c.n && measure == PolarMeasure::lebesgue) {
    return [c](std::span<const double> z) { return open_density_raw(c, z).log_value; };
  }
  return [c, k](std::span<const double> z) { return rank_k_density_raw(c, k, z).log_value; };
}

bool all_spectral(std::span<const Integrand> fs) {
  return std::all_of(fs.begin(), fs.end(), [](const Integrand& f) { return static_cast<bool>(f.spectral_fn); });
}

bool all_invariant(std::span<const Integrand> fs) {
  return std::all_of(fs.begin(), fs.end(),
                     [](const Integrand& f) { return f.m_invariant || static_cast<bool>(f.spectral_fn); });
}

std::optional<std::vector<MNode>> m_rule_for(const CaseDescriptor& c, std::span<const Integrand> fs,
                                             const QuadratureSpec& quad) {
  if (quad.mode == QuadMode::monte_carlo) return std::nullopt;
  if (all_invariant(fs)) {
    const int s = c.matrix_size();
    const bool full = c.model_kind == ModelKind::full_matrix;
    return std::vector<MNode>{
        MNode{CMatrix::Identity(s, s), full ? CMatrix(CMatrix::Identity(s, s)) : CMatrix(), 1.0}};
  }
  if (quad.mode == QuadMode::hybrid) {
    if (c.case_id == "gl_r" && c.n == 2) return deterministic_m_rule(c, quad.angle_points);
    return std::nullopt;
  }
  auto rule = deterministic_m_rule(c, quad.angle_points);
  if (!rule) {
    throw Error(ErrorKind::capability, "no deterministic M-rule for case " + c.case_id + " at n=" +
                                           std::to_string(c.n) + "; use hybrid or monte_carlo mode");
  }
  return rule;
}

std::vector<Estimate> polar_deterministic(const CaseDescriptor& c, int k, std::span<const Integrand> fs,
                                          const QuadratureSpec& quad, const PolarOptions& opts,
                                          const std::vector<MNode>& rule) {
  const auto& radii = quad.truncation_radii;
  const std::size_t nf = fs.size();
  const std::size_t nr = radii.size();

  if (all_spectral(fs)) {
    // Streamed: spectral integrands never need the node list.
    std::vector<double> seg_sum(nf * nr, 0.0);
    std::size_t seg = 0;
    std::int64_t count = 0;
    visit_cone(k, radii, quad.points_per_axis, opts.grading_levels, density_fn(c, k, opts.measure),
               [&](std::span<const double> z, double w) {
                 while (seg + 1 < nr && z[0] > radii[seg]) ++seg;
                 for (std::size_t f = 0; f < nf; ++f) seg_sum[f * nr + seg] += w * fs[f].spectral_fn(z);
                 ++count;
               });
    std::vector<Estimate> out(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      double running = 0.0;
      for (std::size_t r = 0; r < nr; ++r) {
        running += seg_sum[f * nr + r];
        out[f].truncation_trace.push_back({radii[r], running});
      }
      out[f].value = running;
      out[f].samples_used = count;
    }
    return out;
  }

  const ConeNodes nodes = build_cone(k, radii, quad.points_per_axis, opts.grading_levels,
                                     density_fn(c, k, opts.measure));
  const auto cut = radius_cutoffs(nodes, radii);
  const std::size_t count = nodes.w.size();

  // partial[m][f * nr + segment]
  std::vector<std::vector<double>> partial;
  {
    const auto frames = frame(c);
    partial.assign(rule.size(), std::vector<double>(nf * nr, 0.0));
    parallel_for(rule.size(), quad.resolved_workers(), [&](std::size_t mi) {
      const MNode& m = rule[mi];
      std::vector<CMatrix> b(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) levi_apply(c.model_kind, m.a, m.b, frames[i].entries, b[i]);
      CMatrix x(b[0].rows(), b[0].cols());
      std::vector<double> acc(nf, 0.0);
      std::size_t seg = 0;
      auto flush = [&] {
        for (std::size_t f = 0; f < nf; ++f) {
          partial[mi][f * nr + seg] = m.weight * acc[f];
          acc[f] = 0.0;
        }
        ++seg;
      };
      for (std::size_t i = 0; i < count; ++i) {
        while (seg < nr && i == cut[seg]) flush();
        const double* z = &nodes.z[i * k];
        x.noalias() = z[0] * b[0];
        for (int j = 1; j < k; ++j) x.noalias() += z[j] * b[j];
        for (std::size_t f = 0; f < nf; ++f) {
          const double v = fs[f].spectral_fn ? fs[f].spectral_fn(std::span<const double>(z, k)) : fs[f].matrix_fn(x);
          acc[f] += nodes.w[i] * v;
        }
      }
      while (seg < nr) flush();
    });
  }

  std::vector<Estimate> out(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    double running = 0.0;
    for (std::size_t s = 0; s < nr; ++s) {
      for (const auto& p : partial) running += p[f * nr + s];
      out[f].truncation_trace.push_back({radii[s], running});
    }
    out[f].value = running;
    out[f].samples_used = static_cast<std::int64_t>(count * rule.size());
  }
  return out;
}

std::vector<Estimate> polar_monte_carlo(const CaseDescriptor& c, int k, std::span<const Integrand> fs,
                                        const QuadratureSpec& quad, const PolarOptions& opts, McMany* raw) {
  const double rmax = quad.truncation_radii.back();
  const double sigma = opts.mc_radial_scale;
  if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_argument, "mc_radial_scale must be positive");
  const auto logdens = log_density_fn(c, k, opts.measure);
  const auto frames = frame(c);
  const double log_norm = std::log(2.0) - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
  const double log_kfact = std::lgamma(k + 1.0);
  const std::size_t nf = fs.size();
  const bool spectral_only = all_spectral(fs);

  auto sample = [&](Stream& rng, std::span<cd> out) {
    std::vector<double> z(static_cast<std::size_t>(k));
    for (auto& zi : z) zi = sigma * std::abs(rng.normal());
    std::sort(z.begin(), z.end(), std::greater<>());
    CMatrix x;
    if (!spectral_only) {
      const CompactElement m = haar_sample_M(c, rng);
      CMatrix b;
      x = CMatrix::Zero(c.matrix_size(), c.matrix_size());
      for (int i = 0; i < k; ++i) {
        levi_apply(c.model_kind, m.a, m.b, frames[i].entries, b);
        x += z[i] * b;
      }
    }
    double weight = 0.0;
    if (z[0] <= rmax) {
      double log_q = log_kfact;
      for (double zi : z) log_q += log_norm - zi * zi / (2.0 * sigma * sigma);
      const double ld = logdens(z);
      if (std::isfinite(ld)) weight = std::exp(ld - log_q);
    }
    for (std::size_t f = 0; f < nf; ++f) {
      if (weight == 0.0) {
        out[f] = 0.0;
        continue;
      }
      const double v = fs[f].spectral_fn ? fs[f].spectral_fn(z) : fs[f].matrix_fn(x);
      out[f] = weight * v;
    }
  };
  McMany mc = mc_integrate_many(nf, sample, McOptions{quad.mc_samples, quad.seed, 1.0, quad.resolved_workers()});
  for (auto& e : mc.estimates) e.truncation_trace = {{rmax, e.value.real()}};
  std::vector<Estimate> out = mc.estimates;
  if (raw) *raw = std::move(mc);
  return out;
}

}  // namespace

DensityValue open_density_raw(const CaseDescriptor& c, std::span<const double> z) {
  if (static_cast<int>(z.size()) != c.n) throw Error(ErrorKind::shape_mismatch, "open density needs n coordinates");
  return log_density(z, static_cast<double>(c.e), static_cast<double>(c.d));
}

DensityValue rank_k_density_raw(const CaseDescriptor& c, int k, std::span<const double> z) {
  check_k(c, k);
  if (static_cast<int>(z.size()) != k) throw Error(ErrorKind::shape_mismatch, "rank-k density needs k coordinates");
  return log_density(z, static_cast<double>(c.d * (c.n - k + 1) - 1), static_cast<double>(c.d));
}

DensityValue density_open(const CaseDescriptor& c, const ConePoint& z) { return open_density_raw(c, z.values()); }

DensityValue density_rank_k(const CaseDescriptor& c, int k, const ConePoint& z) {
  return rank_k_density_raw(c, k, z.values());
}

double jacobian_Ta(const CaseDescriptor& c, std::span<const double> log_a) {
  if (static_cast<int>(log_a.size()) != c.n) throw Error(ErrorKind::shape_mismatch, "jacobian_Ta needs n exponents");
  double sum = 0.0;
  for (double ci : log_a) sum += ci;
  // a^(2 nu) = exp(2 sum c_i)
  double value = std::exp(-2.0 * c.d * (c.n - 1) * sum);
  for (std::size_t i = 0; i < log_a.size(); ++i) {
    for (std::size_t j = i + 1; j < log_a.size(); ++j) {
      value *= std::pow(std::abs(std::exp(4.0 * log_a[i]) - std::exp(4.0 * log_a[j])), c.d);
    }
  }
  return value;
}

std::optional<std::vector<MNode>> deterministic_m_rule(const CaseDescriptor& c, int angle_points) {
  if (angle_points < 4) throw Error(ErrorKind::invalid_argument, "angle_points must be >= 4");
  std::vector<MNode> rule;
  if (c.case_id == "gl_r" && c.n == 2) {
    const QuadRule th = periodic_rule(angle_points);
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0})
        for (std::size_t i = 0; i < th.size(); ++i)
          for (std::size_t j = 0; j < th.size(); ++j) {
            rule.push_back({rotation(th.nodes[i], s1), rotation(th.nodes[j], s2), 0.25 * th.weights[i] * th.weights[j]});
          }
    return rule;
  }
  if (c.case_id == "sp_c" && c.n == 2) {
    const int per_axis = std::max(4, (angle_points + 2) / 3);
    const QuadRule ph = periodic_rule(per_axis);
    const QuadRule uu = gauss_nodes(per_axis, 0.0, 1.0);
    const cd I(0.0, 1.0);
    for (std::size_t ia = 0; ia < ph.size(); ++ia)
      for (std::size_t ip = 0; ip < ph.size(); ++ip)
        for (std::size_t iq = 0; iq < ph.size(); ++iq)
          for (std::size_t iu = 0; iu < uu.size(); ++iu) {
            const double ce = std::sqrt(uu.nodes[iu]);
            const double se = std::sqrt(1.0 - uu.nodes[iu]);
            const cd psi = std::exp(I * ph.nodes[ip]);
            const cd phi = std::exp(I * ph.nodes[iq]);
            CMatrix s(2, 2);
            s << psi * ce, phi * se, -std::conj(phi) * se, std::conj(psi) * ce;
            s *= std::exp(I * ph.nodes[ia]);
            rule.push_back({s, CMatrix(), ph.weights[ia] * ph.weights[ip] * ph.weights[iq] * uu.weights[iu]});
          }
    return rule;
  }
  return std::nullopt;
}

bool polar_is_deterministic(const CaseDescriptor& c, const Integrand& f, const QuadratureSpec& quad) {
  if (quad.mode == QuadMode::monte_carlo) return false;
  if (f.m_invariant || f.spectral_fn) return true;
  if (quad.mode == QuadMode::hybrid) return c.case_id == "gl_r" && c.n == 2;
  return deterministic_m_rule(c, quad.angle_points).has_value();
}

std::vector<Estimate> integrate_polar_many(const CaseDescriptor& c, int k, std::span<const Integrand> fs,
                                           const QuadratureSpec& quad, const PolarOptions& opts, McMany* mc) {
  require_backend(c);
  check_k(c, k);
  quad.validate();
  if (fs.empty()) return {};
  for (const auto& f : fs) {
    if (!f.matrix_fn && !f.spectral_fn) throw Error(ErrorKind::invalid_argument, "integrand has no function");
  }
  const auto rule = m_rule_for(c, fs, quad);
  if (rule) return polar_deterministic(c, k, fs, quad, opts, *rule);
  return polar_monte_carlo(c, k, fs, quad, opts, mc);
}

Estimate integrate_polar(const CaseDescriptor& c, int k, const Integrand& f, const QuadratureSpec& quad,
                         const PolarOptions& opts) {
  return integrate_polar_many(c, k, std::span<const Integrand>(&f, 1), quad, opts).front();
}

std::vector<Estimate> integrate_lebesgue_direct_many(const CaseDescriptor& c,
                                                     std::span<const std::function<double(const CMatrix&)>> fs,
                                                     const QuadratureSpec& quad, const DirectOptions& opts) {
  require_backend(c);
  const int dim = c.ambient_dim;
  const std::size_t nf = fs.size();
  const int s = c.matrix_size();
  if (dim > opts.max_grid_dim) {
    if (quad.mode == QuadMode::deterministic) {
      throw Error(ErrorKind::capability, "tensor grid limited to " + std::to_string(opts.max_grid_dim) +
                                             " dimensions; ambient dimension is " + std::to_string(dim));
    }
    // exp(|v|^2/2) (2 pi)^(dim/2) importance weights for a standard normal proposal.
    const double log_norm = 0.5 * dim * std::log(2.0 * std::numbers::pi);
    auto sample = [&](Stream& rng, std::span<cd> out) {
      std::vector<double> v(static_cast<std::size_t>(dim));
      double r2 = 0.0;
      for (auto& vi : v) {
        vi = rng.normal();
        r2 += vi * vi;
      }
      CMatrix x(s, s);
      coordinates_to_matrix(c, v, x);
      const double w = std::exp(log_norm + 0.5 * r2);
      for (std::size_t f = 0; f < nf; ++f) out[f] = w * fs[f](x);
    };
    return mc_integrate_many(nf, sample, McOptions{quad.mc_samples, quad.seed, 1.0, quad.resolved_workers()})
        .estimates;
  }
  if (opts.points < 2 || !(opts.half_width > 0.0)) throw Error(ErrorKind::invalid_argument, "bad direct grid");
  const int np = opts.points;
  const double h = 2.0 * opts.half_width / (np - 1);
  std::vector<double> axis(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) axis[i] = -opts.half_width + h * i;
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(np), std::vector<double>(nf, 0.0));
  parallel_for(static_cast<std::size_t>(np), quad.resolved_workers(), [&](std::size_t first) {
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> v(static_cast<std::size_t>(dim));
    CMatrix x(s, s);
    v[0] = axis[first];
    for (;;) {
      for (int j = 1; j < dim; ++j) v[j] = axis[idx[j]];
      coordinates_to_matrix(c, v, x);
      for (std::size_t f = 0; f < nf; ++f) partial[first][f] += fs[f](x);
      int j = dim - 1;
      while (j >= 1 && ++idx[j] == np) idx[j--] = 0;
      if (j < 1) break;
    }
  });
  const double cell = std::pow(h, dim);
  std::vector<Estimate> out(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    double acc = 0.0;
    for (const auto& p : partial) acc += p[f];
    out[f].value = cell * acc;
    out[f].samples_used = static_cast<std::int64_t>(std::pow(static_cast<double>(np), dim));
    out[f].truncation_trace = {{opts.half_width, out[f].value.real()}};
  }
  return out;
}

Estimate integrate_lebesgue_direct(const CaseDescriptor& c, const std::function<double(const CMatrix&)>& f,
                                   const QuadratureSpec& quad, const DirectOptions& opts) {
  return integrate_lebesgue_direct_many(c, std::span<const std::function<double(const CMatrix&)>>(&f, 1), quad, opts)
      .front();
}

std::function<double(const CMatrix&)> gaussian_test_function(double width) {
  return [width](const CMatrix& x) { return std::exp(-width * x.squaredNorm()); };
}

std::vector<Integrand> standard_polar_integrands() {
  std::vector<Integrand> fs(3);
  fs[0].matrix_fn = gaussian_test_function(1.0);
  fs[0].m_invariant = true;
  fs[1].matrix_fn = gaussian_test_function(2.0);
  fs[1].m_invariant = true;
  fs[2].matrix_fn = [](const CMatrix& x) {
    const double a = x(0, 1).real();
    return a * a * std::exp(-x.squaredNorm());
  };
  return fs;
}

PolarComparison compare_polar_direct(const CaseDescriptor& c, std::span<const Integrand> fs, const QuadratureSpec& quad,
                                     const DirectOptions& direct) {
  if (fs.size() < 2) throw Error(ErrorKind::invalid_argument, "need at least two integrands to compare");
  PolarComparison out;
  out.polar = integrate_polar_many(c, c.n, fs, quad);
  std::vector<std::function<double(const CMatrix&)>> plain;
  for (const auto& f : fs) {
    if (!f.matrix_fn) throw Error(ErrorKind::invalid_argument, "direct integration needs matrix_fn");
    plain.push_back(f.matrix_fn);
  }
  out.direct = integrate_lebesgue_direct_many(c, plain, quad, direct);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      const double rp = out.polar[i].real() / out.polar[j].real();
      const double rd = out.direct[i].real() / out.direct[j].real();
      out.max_ratio_deviation = std::max(out.max_ratio_deviation, std::abs(rp / rd - 1.0));
    }
  }
  return out;
}

VerificationReport polar_formula_report(const CaseDescriptor& c, const QuadratureSpec& quad, double tolerance,
                                        const DirectOptions& direct) {
  Stopwatch clock;
  const auto fs = standard_polar_integrands();
  QuadratureSpec q = quad;
  if (q.mode == QuadMode::hybrid && deterministic_m_rule(c, q.angle_points)) q.mode = QuadMode::deterministic;
  const PolarComparison cmp = compare_polar_direct(c, fs, q, direct);
  auto rel = [](const Estimate& e) { return e.std_error / std::abs(e.real()); };
  double worst = -1.0, predicted = 0.0, measured = 0.0, rel_se = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      const double rp = cmp.polar[i].real() / cmp.polar[j].real();
      const double rd = cmp.direct[i].real() / cmp.direct[j].real();
      const double dev = std::abs(rp / rd - 1.0);
      if (dev > worst) {
        worst = dev;
        predicted = rd;
        measured = rp;
        const double a = rel(cmp.polar[i]), b = rel(cmp.polar[j]), x = rel(cmp.direct[i]), y = rel(cmp.direct[j]);
        rel_se = std::sqrt(a * a + b * b + x * x + y * y);
      }
    }
  }
  VerificationReport rep;
  rep.claim_id = "polar-open";
  rep.case_id = c.case_id;
  rep.param("n", std::int64_t{c.n})
      .param("integrands", static_cast<std::int64_t>(fs.size()))
      .param("mode", std::string(to_string(q.mode)))
      .param("max_ratio_deviation", cmp.max_ratio_deviation);
  rep.predicted = predicted;
  rep.measured = measured;
  rep.tolerance = std::max(tolerance, 5.0 * rel_se);
  if (rel_se > 0.0) rep.std_error = rel_se * std::abs(measured);
  rep.verdict = scalar_verdict(predicted, measured, rep.tolerance);
  rep.seed = q.seed;
  rep.anchor = "Lebesgue measure in polar coordinates: P^(e+1) V^d / P dz dm";
  rep.notes = "integrand ratios, polar against direct";
  rep.runtime_seconds = clock.seconds();
  return rep;
}

VerificationReport polar_homogeneity_report(const CaseDescriptor& c, int k, const QuadratureSpec& quad,
                                            double tolerance) {
  Stopwatch clock;
  require_backend(c);
  check_k(c, k);
  constexpr double lambda = 2.0;
  const auto base = standard_polar_integrands();
  const std::size_t nb = base.size();
  std::vector<Integrand> fs(base.begin(), base.end());
  for (const auto& f : base) {
    Integrand g = f;
    g.matrix_fn = [h = f.matrix_fn, lambda](const CMatrix& x) { return h(x / lambda); };
    if (f.spectral_fn) {
      g.spectral_fn = [h = f.spectral_fn, lambda](std::span<const double> z) {
        std::vector<double> w(z.begin(), z.end());
        for (auto& v : w) v /= lambda;
        return h(w);
      };
    }
    fs.push_back(std::move(g));
  }
  PolarOptions opts;
  opts.mc_radial_scale = lambda / std::sqrt(frobenius_norm2(frame(c)[0]));
  McMany mc;
  const auto est = integrate_polar_many(c, k, fs, quad, opts, &mc);

  const double predicted = std::pow(lambda, c.d * k * c.n);
  double worst = -1.0, measured = 0.0, se = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    double r = est[nb + i].real() / est[i].real();
    double s = 0.0;
    if (!mc.estimates.empty()) {
      const RatioEstimate re = mc_ratio(mc, nb + i, i);
      r = re.value;
      s = re.std_error;
    }
    const double dev = std::abs(r / predicted - 1.0);
    if (dev > worst) {
      worst = dev;
      measured = r;
      se = s;
    }
  }
  VerificationReport rep;
  rep.claim_id = "polar-rank-k";
  rep.case_id = c.case_id;
  rep.param("n", std::int64_t{c.n})
      .param("k", std::int64_t{k})
      .param("lambda", lambda)
      .param("integrands", static_cast<std::int64_t>(nb))
      .param("mode", std::string(mc.estimates.empty() ? "deterministic" : "monte_carlo"));
  rep.predicted = predicted;
  rep.measured = measured;
  rep.tolerance = std::max(tolerance, 5.0 * se / predicted);
  if (!mc.estimates.empty()) rep.std_error = se;
  rep.verdict = scalar_verdict(predicted, measured, rep.tolerance);
  rep.seed = quad.seed;
  rep.anchor = "rank-k measure in polar coordinates: [P_k^(n-k+1) V_k]^d d_k^x z dm";
  rep.notes = "Int f(x/lambda) d mu_k / Int f d mu_k against lambda^(dkn)";
  rep.runtime_seconds = clock.seconds();
  return rep;
}

VerificationReport check_equivariance(const CaseDescriptor& c, int k, const LeviElement& l, const QuadratureSpec& quad,
                                      double tolerance, const std::function<double(const CMatrix&)>& f,
                                      bool lebesgue) {
  Stopwatch clock;
  require_backend(c);
  check_k(c, k);
  if (lebesgue && k != c.n) throw Error(ErrorKind::invalid_argument, "Lebesgue equivariance needs k = n");
  if (l.case_id != c.case_id) throw Error(ErrorKind::case_mismatch, "Levi element belongs to another case");

  std::vector<Integrand> fs(2);
  fs[0].matrix_fn = f;
  fs[1].matrix_fn = [f, l, kind = c.model_kind](const CMatrix& x) {
    thread_local CMatrix y;
    levi_apply(kind, l.a, l.b, x, y);
    return f(y);
  };
  PolarOptions opts;
  opts.measure = lebesgue ? PolarMeasure::lebesgue : PolarMeasure::orbit;
  // Proposal wide enough for both f and f(l .).
  const Eigen::VectorXd sv = linalg::singular_values(action_matrix(c, l).cast<cd>());
  const double y_norm = std::sqrt(frobenius_norm2(frame(c)[0]));
  opts.mc_radial_scale = 1.0 / (std::min(1.0, sv(sv.size() - 1)) * y_norm);

  McMany mc;
  const auto est = integrate_polar_many(c, k, fs, quad, opts, &mc);
  double rho = est[1].real() / est[0].real();
  std::optional<double> se;
  if (!mc.estimates.empty()) {
    const RatioEstimate r = mc_ratio(mc, 1, 0);
    rho = r.value;
    se = r.std_error;
  }
  const double exponent = lebesgue ? lebesgue_equivariance_exponent(c) : equivariance_exponent(c, k);
  const double chi = std::pow(character_nu(c, l), exponent);

  VerificationReport rep;
  rep.claim_id = "equivariance";
  rep.case_id = c.case_id;
  rep.param("n", std::int64_t{c.n})
      .param("k", std::int64_t{k})
      .param("measure", std::string(lebesgue ? "lebesgue" : "orbit"))
      .param("nu_exponent", exponent)
      .param("mode", std::string(mc.estimates.empty() ? "deterministic" : "monte_carlo"));
  rep.predicted = chi;
  rep.measured = rho;
  rep.tolerance = tolerance;
  rep.std_error = se;
  rep.verdict = scalar_verdict(chi, rho, tolerance);
  if (rep.verdict == Verdict::fail && se && 2.0 * *se > tolerance * chi) {
    rep.verdict = Verdict::inconclusive;
    rep.notes = "standard error exceeds half the tolerance";
  }
  rep.seed = quad.seed;
  rep.anchor = lebesgue ? "Lebesgue measure on the algebra is e^{2r nu}-equivariant"
                        : "the rank-k orbit carries an e^{2dk nu}-equivariant measure";
  rep.runtime_seconds = clock.seconds();
  return rep;
}

}  // namespace jorbit
