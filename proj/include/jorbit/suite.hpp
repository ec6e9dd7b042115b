#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "jorbit/case_registry.hpp"
#include "jorbit/models.hpp"
#include "jorbit/quadrature.hpp"
#include "jorbit/report.hpp"

namespace jorbit {

struct SuiteOptions {
  int random_levis = 3;                // random Levi elements per equivariance rank
  double equivariance_tolerance = 0.02;
  double cayley_s = 3.0;
  int cayley_points = 5;
  std::int64_t rank_draws = 20000;
  int phi_power_points = 100;
};

/// Registry row invariants (claim "registry").
VerificationReport registry_report(const CaseDescriptor& c);

/// Coordinate round trips and the Jordan norm transformation rule at random points
/// (claims "model-roundtrip", "norm-equivariance").
std::vector<VerificationReport> model_reports(const CaseDescriptor& c, std::uint64_t seed, int points = 20);

/// 0, y_1, 2 y_1 and the unit of the rank-min(2, n) Peirce subalgebra.
std::vector<AlgebraElement> fourier_test_points(const CaseDescriptor& c);

/// (diag(2, 1, ..., 1), I) on full models, diag(2, 1, ..., 1) otherwise.
LeviElement scaling_levi(const CaseDescriptor& c);

/// Every check for one case, in a fixed order. Metadata-only cases get the registry check and
/// skip records; a step that throws becomes a fail report carrying the error text.
std::vector<VerificationReport> run_suite(std::string_view case_id, int n, const QuadratureSpec& spec,
                                          const SuiteOptions& options = {},
                                          std::optional<int> family_parameter = std::nullopt);

}  // namespace jorbit
