#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "jorbit/case_registry.hpp"
#include "jorbit/models.hpp"
#include "jorbit/quadrature.hpp"
#include "jorbit/report.hpp"

namespace jorbit {

/// Log of a polar density weight relative to dz_1 ... dz_k.
struct DensityValue {
  double log_value = -std::numeric_limits<double>::infinity();
  bool boundary = true;

  double value() const { return boundary ? 0.0 : std::exp(log_value); }
};

/// P^(e+1) V^d / P with P = prod z_i, V = prod_{i<j} (z_i^2 - z_j^2).
DensityValue density_open(const CaseDescriptor& c, const ConePoint& z);
/// P^(d(n-k+1)) V^d / P.
DensityValue density_rank_k(const CaseDescriptor& c, int k, const ConePoint& z);

/// Same formulas on a raw tuple; boundary points give boundary = true.
DensityValue open_density_raw(const CaseDescriptor& c, std::span<const double> z);
DensityValue rank_k_density_raw(const CaseDescriptor& c, int k, std::span<const double> z);

/// |det T_a| = a^(-2d(n-1) nu) prod_{i<j} |a^(4 eps_i) - a^(4 eps_j)|^d for a^(eps_i) = exp(c_i),
/// with a^(2 nu) = prod a^(2 eps_i). Defined up to a constant factor. Under z_i = a^(2 eps_i),
/// a^(2 r nu) |det T_a| d^x z equals the open-orbit density.
double jacobian_Ta(const CaseDescriptor& c, std::span<const double> log_a);

/// An integrand on the algebra. `matrix_fn` sees the model matrix. When the function is
/// known to depend on the spectrum only, `spectral_fn` (if set) is used instead and the
/// M-integral is skipped; `m_invariant` alone keeps the matrix path with a single M node.
struct Integrand {
  std::function<double(const CMatrix&)> matrix_fn;
  std::function<double(std::span<const double>)> spectral_fn;
  bool m_invariant = false;
};

/// Which measure the cone carries at k = n.
enum class PolarMeasure { lebesgue, orbit };

struct PolarOptions {
  PolarMeasure measure = PolarMeasure::lebesgue;  // ignored for k < n (always the orbit measure)
  int grading_levels = 4;                         // dyadic panels below 1
  double mc_radial_scale = 1.0;                   // half-normal proposal scale for cone samples
};

/// Weighted nodes of M for a deterministic inner integral.
struct MNode {
  CMatrix a;
  CMatrix b;
  double weight = 0.0;
};

/// Product rules: GL_r n=2 uses O(2) x O(2) (angles and reflections); sp_c n=2 uses
/// U(2) = U(1) SU(2) Euler angles with ceil(angle_points/3) nodes per axis.
/// Returns nullopt where no rule exists.
std::optional<std::vector<MNode>> deterministic_m_rule(const CaseDescriptor& c, int angle_points);

/// True when integrate_polar would take the deterministic path for this spec.
bool polar_is_deterministic(const CaseDescriptor& c, const Integrand& f, const QuadratureSpec& quad);

/// Int_{C_k} Int_M f(m . z) dm d_k z with the proportionality constant set to 1.
/// Deterministic path: nested ordered-cone Gauss panels (z_{i+1} in [0, z_i]) times an M-rule;
/// the trace holds the value with z_1 <= R for every truncation radius.
/// Monte Carlo path: Haar m and ordered half-normal cone samples, restricted to z_1 <= the
/// last radius.
Estimate integrate_polar(const CaseDescriptor& c, int k, const Integrand& f, const QuadratureSpec& quad,
                         const PolarOptions& opts = {});

/// Several integrands on the same nodes or samples. `mc` receives the raw Monte Carlo
/// batches when that path is taken.
std::vector<Estimate> integrate_polar_many(const CaseDescriptor& c, int k, std::span<const Integrand> fs,
                                           const QuadratureSpec& quad, const PolarOptions& opts = {},
                                           McMany* mc = nullptr);

struct DirectOptions {
  int points = 19;          // trapezoid nodes per coordinate
  double half_width = 5.4;  // grid on [-half_width, half_width]
  int max_grid_dim = 6;
};

/// Int f dlambda over the algebra in orthonormal coordinates: tensor trapezoid grid for
/// ambient_dim <= max_grid_dim, otherwise Gaussian importance sampling (capability error in
/// deterministic mode).
Estimate integrate_lebesgue_direct(const CaseDescriptor& c, const std::function<double(const CMatrix&)>& f,
                                   const QuadratureSpec& quad, const DirectOptions& opts = {});
std::vector<Estimate> integrate_lebesgue_direct_many(const CaseDescriptor& c,
                                                     std::span<const std::function<double(const CMatrix&)>> fs,
                                                     const QuadratureSpec& quad, const DirectOptions& opts = {});

/// exp(-width * ||x||^2).
std::function<double(const CMatrix&)> gaussian_test_function(double width = 1.0);

/// rho = Int f(l x) d mu_k / Int f d mu_k against character_nu(l)^(2dk).
/// With `lebesgue` set (k = n only) the measure is Lebesgue and the exponent 2r.
VerificationReport check_equivariance(const CaseDescriptor& c, int k, const LeviElement& l,
                                      const QuadratureSpec& quad, double tolerance,
                                      const std::function<double(const CMatrix&)>& f = gaussian_test_function(),
                                      bool lebesgue = false);

/// Polar against direct Lebesgue integration for a list of integrands: every ratio
/// polar(f_i)/polar(f_0) must match direct(f_i)/direct(f_0).
struct PolarComparison {
  std::vector<Estimate> polar;
  std::vector<Estimate> direct;
  double max_ratio_deviation = 0.0;
};
PolarComparison compare_polar_direct(const CaseDescriptor& c, std::span<const Integrand> fs, const QuadratureSpec& quad,
                                     const DirectOptions& direct = {});

/// Report for compare_polar_direct with the standard integrands. predicted/measured are the
/// direct and polar ratios of the worst pair. Hybrid mode uses the deterministic M-rule where one
/// exists; with sampling involved the tolerance widens to
/// five combined relative standard errors.
VerificationReport polar_formula_report(const CaseDescriptor& c, const QuadratureSpec& quad, double tolerance = 1e-3,
                                        const DirectOptions& direct = {});

/// Homogeneity of the rank-k polar measure: Int f(x/2) d mu_k / Int f d mu_k = 2^(dkn) for
/// each standard integrand; reports the worst one.
VerificationReport polar_homogeneity_report(const CaseDescriptor& c, int k, const QuadratureSpec& quad,
                                            double tolerance = 1e-3);

/// The three standard integrands: exp(-|x|^2), exp(-2|x|^2), Re(x_11)^2 exp(-|x|^2).
std::vector<Integrand> standard_polar_integrands();

}  // namespace jorbit
