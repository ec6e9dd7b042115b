#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jorbit {

enum class BaseField { real, complex, quaternion };
enum class ModelKind { full_matrix, symmetric_matrix, skew_matrix, metadata_only };

std::string_view to_string(BaseField field);
std::string_view to_string(ModelKind kind);

/// One row of the group table together with its derived constants.
///
/// `n` is the Jordan rank, `d` and `e` the short/long root multiplicities.
/// For the rows whose `d` is the family parameter p (O_{p+2,p+2}, O_{p+4}(C))
/// `family_parameter` holds p.
struct CaseDescriptor {
  std::string case_id;
  std::string group_name;
  BaseField base_field = BaseField::real;
  ModelKind model_kind = ModelKind::metadata_only;
  int n = 1;
  int d = 0;
  int e = 0;
  int ambient_dim = 1;
  bool backend_available = false;
  std::optional<int> family_parameter;
  std::optional<int> fixed_rank;

  /// r = d(n-1) + (e+1); Lebesgue measure on the algebra is e^{2 r nu}-equivariant.
  int r() const { return d * (n - 1) + (e + 1); }
  bool is_complex_model() const { return base_field == BaseField::complex; }
  /// Side length of the matrices realizing the algebra (2n for the skew model).
  int matrix_size() const { return model_kind == ModelKind::skew_matrix ? 2 * n : n; }

  friend bool operator==(const CaseDescriptor&, const CaseDescriptor&) = default;
};

int ambient_dim_from_multiplicities(int n, int d, int e);

/// All table rows. Families with free rank are instantiated at `default_rank`.
std::vector<CaseDescriptor> list_cases(int default_rank = 2);

/// Throws Error{not_found} for unknown ids and Error{admissibility} for the excluded
/// O(p,q), p != q family. Rank-fixed families reject any other `n`.
CaseDescriptor lookup_case(std::string_view case_id, int n,
                           std::optional<int> family_parameter = std::nullopt);

/// The same family at Jordan rank k (the Peirce subalgebra of a rank-k idempotent).
CaseDescriptor sub_case(const CaseDescriptor& c, int k);

/// Phi_t is square integrable iff t is strictly below this value.
double l2_threshold(const CaseDescriptor& c);

/// Multiple of nu in the character of the rank-k equivariant measure (2dk).
double equivariance_exponent(const CaseDescriptor& c, int k);

/// Multiple of nu for Lebesgue measure on the whole algebra (2r).
double lebesgue_equivariance_exponent(const CaseDescriptor& c);

/// tau = (d - e - 1)/2, the order of the rank-one K-Bessel kernel.
double bessel_parameter(const CaseDescriptor& c);

/// Checks every row invariant; returns a list of violations (empty when sound).
std::vector<std::string> registry_violations(const CaseDescriptor& c);

}  // namespace jorbit
