#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "jorbit/case_registry.hpp"
#include "jorbit/models.hpp"
#include "jorbit/quadrature.hpp"
#include "jorbit/report.hpp"

namespace jorbit {

struct SphericalParams {
  std::string case_id;
  double t = 0.0;
};

struct BesselKernel {
  double tau = 0.0;
  std::string case_id;
};
BesselKernel bessel_kernel(const CaseDescriptor& c);

/// prod_i (1 + sigma_i(x)^2)^(t/2).
double phi_t(double t, const AlgebraElement& x);
double phi_t(const SphericalParams& p, const AlgebraElement& x);
double phi_t_spectral(double t, std::span<const double> z);

/// Phi_{-dk}(x) = Phi_{-d}(x)^k at the supplied points.
VerificationReport phi_power_identity(const CaseDescriptor& c, int k, std::span<const AlgebraElement> points,
                                      double tolerance = 1e-12);
/// Same at `count` random points (Gaussian entries of random scale).
VerificationReport phi_power_identity_random(const CaseDescriptor& c, int k, int count, std::uint64_t seed,
                                             double tolerance = 1e-12);

/// Square integrability of Phi_t is predicted iff 2t + e + 2d(n-1) + 1 < 0.
bool phi_l2_predicted_finite(const CaseDescriptor& c, double t);

/// Radii for the L^2 scans: doubling from 2 up to 2^48; the slowest tails at t = threshold
/// -/+ 0.1 decay like R^(-0.2).
std::vector<double> default_l2_scan_radii();

/// Int |Phi_t|^2 dlambda on nested truncations z_1 <= R. Empty `radii` selects
/// default_l2_scan_radii().
ScanResult phi_l2_scan(const CaseDescriptor& c, double t, const QuadratureSpec& quad, std::span<const double> radii = {});
VerificationReport phi_l2_verdict(const SphericalParams& p, int n, const QuadratureSpec& quad,
                                  std::span<const double> radii = {});

/// K_tau(z) from Int_0^inf exp(-z cosh u) cosh(tau u) du (trapezoid in u, step 0.1).
/// Throws Error{out_of_range} for z <= 0.
double bessel_k(double tau, double z);

/// K_tau(z) / z^tau.
double upsilon(const BesselKernel& kernel, double z);
double upsilon(double tau, double z);

/// Int_0^inf K_nu(z) z^(s-1) dz = 2^(s-2) Gamma((s-nu)/2) Gamma((s+nu)/2).
double bessel_mellin(double nu, double s);

/// Radial rule for Int_0^inf h(z) dz with kernel-type integrands: geometric panels from
/// 2^-48 to 1, doubling panels up to `radius`, each panel at most `max_width` wide.
QuadRule radial_rule(double radius = 128.0, int points_per_panel = 16, double max_width = 4.0);

/// Int_0^inf upsilon(z) z^(dn-1) dz by quadrature, with a truncation trace.
Estimate rank1_mass(const CaseDescriptor& c, int points_per_panel = 16);
/// The same integral in closed form (Mellin transform at s = dn - tau).
double rank1_mass_closed_form(const CaseDescriptor& c);

/// Tabulated radial weights g_j = upsilon(z_j) z_j^power w_j for transforms
/// G(w) = Int_0^inf exp(-i z w) upsilon(z) z^power dz with |w| <= max_frequency.
class RadialTransform {
 public:
  RadialTransform(double tau, double power, double max_frequency, int points_per_panel = 16,
                  std::vector<double> radii = {16.0, 32.0, 64.0, 128.0});

  std::complex<double> operator()(double w) const;
  /// Real part of the transform truncated at each radius.
  std::vector<TracePoint> trace(double w) const;
  std::size_t size() const { return z_.size(); }

 private:
  std::vector<double> z_;
  std::vector<double> g_;
  std::vector<double> radii_;
  std::vector<std::size_t> cut_;
};

/// Int_0^inf K_0(z) cos(x z) dz (= (pi/2)(1+x^2)^(-1/2)).
double k0_cosine_transform(double x);

/// Int_0^inf Int_M exp(-i z <x, m.y_1>) upsilon(z) z^(dn-1) dz dm. The M-integral uses the
/// deterministic rule where available (as in integrate_polar), Haar Monte Carlo otherwise.
/// The trace records the real part for z-truncations 16, 32, 64, 128.
Estimate rank1_fourier(const CaseDescriptor& c, const AlgebraElement& x, const QuadratureSpec& quad);

/// True if the last two entries of the trace agree to `tol` (relative to max(|v|, 1e-300)).
bool trace_converged(const Estimate& e, double tol = 1e-6);

/// rank1_fourier(x) / Phi_{-d}(x) at the given points, required constant to `tolerance`.
VerificationReport rank1_fourier_identity(const CaseDescriptor& c, std::span<const AlgebraElement> points,
                                          const QuadratureSpec& quad, double tolerance = 0.02);

/// Bessel checks: half-integer closed form, reflection, recurrence, small-z and large-z
/// asymptotics and the K_0 cosine transform.
std::vector<VerificationReport> bessel_selftest();

/// Mass of the rank-one kernel against its closed form.
VerificationReport rank1_mass_report(const CaseDescriptor& c, double tolerance = 1e-8);

}  // namespace jorbit
