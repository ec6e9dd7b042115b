#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jorbit/case_registry.hpp"
#include "jorbit/models.hpp"
#include "jorbit/polynomial.hpp"
#include "jorbit/quadrature.hpp"
#include "jorbit/report.hpp"

namespace jorbit {

/// Inverse-CDF table for the normalized radial law upsilon(z) z^(dn-1) / mass.
struct Rank1Sampler {
  CaseDescriptor descriptor;
  std::string case_id;
  std::vector<double> z;    // z[0] = 0, then log-spaced nodes up to z_max
  std::vector<double> cdf;  // strictly increasing, cdf[0] = 0, cdf.back() = 1
  double mass = 0.0;        // closed-form mass of the unnormalized law
  double tail_mass = 0.0;   // relative mass outside the table
  std::uint64_t seed = 0;
};

/// Builds the table on `grid_points` log-spaced nodes from 1e-12 to z_max, where z_max is the
/// first multiple of 4 past 16 beyond which the tail is below 1e-12 of the mass.
Rank1Sampler make_rank1_sampler(const CaseDescriptor& c, std::uint64_t seed = 0, int grid_points = 4096);

/// Radius at probability level u in [0, 1] by linear interpolation of the table.
double sampler_quantile(const Rank1Sampler& s, double u);
/// Normalized CDF at z.
double sampler_cdf(const Rank1Sampler& s, double z);

/// y = z (m . y_1) with z from the table and m Haar distributed.
AlgebraElement sample_rank1(const Rank1Sampler& s, Stream& rng);
void sample_rank1_into(const Rank1Sampler& s, Stream& rng, CMatrix& out);

/// Sum of k independent rank-one samples.
AlgebraElement sum_sample_rankk(const Rank1Sampler& s, int k, Stream& rng);
AlgebraElement sum_sample_rankk(const CaseDescriptor& c, int k, Stream& rng);

/// mass^k times the mean of exp(-i <x, Y>) over Y = sum_sample_rankk draws.
Estimate rankk_fourier_mc(const CaseDescriptor& c, int k, const AlgebraElement& x, std::int64_t nsamples,
                          std::uint64_t seed, int workers = 1);

/// |rankk_fourier_mc(x) - rank1_fourier(x)^k| <= 5 combined standard errors, with a relative
/// floor of 1e-6 for the rank-one quadrature.
VerificationReport rankk_fourier_report(const CaseDescriptor& c, int k, const AlgebraElement& x,
                                        const QuadratureSpec& quad);

/// orbit_rank of sum_sample_rankk equals k on every one of `draws` samples.
VerificationReport rankk_rank_report(const CaseDescriptor& c, int k, std::int64_t draws, std::uint64_t seed,
                                     double tol = kDefaultRankTolerance);

enum class CertificateBranch { generic, sp_c };
std::string_view to_string(CertificateBranch b);

/// Exponent bookkeeping for the L^2 statement at rank k < n:
/// t = d(n-k+1) - (e+1), s = d(n-k-1) + (e+1), (l1, l2) = (0, s) or (1, s-1) for Sp_n(C).
struct L2Certificate {
  std::string case_id;
  int n = 0;
  int k = 0;
  Rational t;
  Rational s;
  Rational l1;
  Rational l2;
  CertificateBranch branch = CertificateBranch::generic;
  bool s_positive = false;
  bool sum_matches = false;       // l1 + l2 == s
  bool relation_holds = false;    // s == t + 2(e + 1 - d)
  bool branch_rule_holds = false; // generic: l1 = 0, l2 = s; sp_c: l1 >= 1 and l2 >= 1

  bool valid() const { return s_positive && sum_matches && relation_holds && branch_rule_holds; }
};

/// Throws Error{out_of_range} unless 1 <= k < n.
L2Certificate l2_certificate(const CaseDescriptor& c, int k);
VerificationReport l2_certificate_report(const CaseDescriptor& c, int k);

/// Int_0^inf (Gamma-closed-form) K_tau(z)^2 z^(mu-1) dz with mu = dn - 2 tau.
double rank1_l2_closed_form(const CaseDescriptor& c);

/// Int upsilon(z)^2 d mu_1 by quadrature with the rank-one density, against the closed form,
/// plus the same integral in the form |phi~|^t times the Lebesgue density of the rank-one
/// subalgebra (predicted ratio 1) and a scan over lower cutoffs 2^-j.
VerificationReport g_l2_rank1(const CaseDescriptor& c, const QuadratureSpec& quad, double tolerance = 1e-6);

/// The rank-one kernel of the rank-k subalgebra equals the ambient one: same tau, and
/// upsilon agrees at 100 log-spaced z to 1e-12.
VerificationReport stability_restriction_check(const CaseDescriptor& c, int k);

}  // namespace jorbit
