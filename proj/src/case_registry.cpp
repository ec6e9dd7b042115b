#include "jorbit/case_registry.hpp"

#include <algorithm>
#include <array>

#include "jorbit/errors.hpp"

namespace jorbit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::unsupported_backend: return "unsupported-backend";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::case_mismatch: return "case-mismatch";
    case ErrorKind::singular: return "singular";
    case ErrorKind::capability: return "capability";
    case ErrorKind::poisoned_sample: return "poisoned-sample";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

std::string_view to_string(BaseField field) {
  switch (field) {
    case BaseField::real: return "real";
    case BaseField::complex: return "complex";
    case BaseField::quaternion: return "quaternion";
  }
  return "unknown";
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::full_matrix: return "full_matrix";
    case ModelKind::symmetric_matrix: return "symmetric_matrix";
    case ModelKind::skew_matrix: return "skew_matrix";
    case ModelKind::metadata_only: return "metadata_only";
  }
  return "unknown";
}

namespace {

// d < 0 marks a row whose short-root multiplicity is the family parameter p.
struct TableRow {
  std::string_view id;
  std::string_view group;
  BaseField field;
  ModelKind kind;
  int d;
  int e;
  int fixed_rank;  // 0 = free rank
};

constexpr int kParametric = -1;

constexpr std::array<TableRow, 11> kTable{{
    {"gl_r", "GL_{2n}(R)", BaseField::real, ModelKind::full_matrix, 1, 0, 0},
    {"o_2n2n", "O_{2n,2n}", BaseField::real, ModelKind::skew_matrix, 2, 0, 0},
    {"e7_7", "E_{7(7)}", BaseField::real, ModelKind::metadata_only, 4, 0, 3},
    {"o_pp2", "O_{p+2,p+2}", BaseField::real, ModelKind::metadata_only, kParametric, 0, 2},
    {"sp_c", "Sp_n(C)", BaseField::complex, ModelKind::symmetric_matrix, 1, 1, 0},
    {"gl_c", "GL_{2n}(C)", BaseField::complex, ModelKind::full_matrix, 2, 1, 0},
    {"o_4n_c", "O_{4n}(C)", BaseField::complex, ModelKind::metadata_only, 4, 1, 0},
    {"e7_c", "E_7(C)", BaseField::complex, ModelKind::metadata_only, 8, 1, 3},
    {"o_p4_c", "O_{p+4}(C)", BaseField::complex, ModelKind::metadata_only, kParametric, 1, 2},
    {"sp_nn", "Sp_{n,n}", BaseField::quaternion, ModelKind::metadata_only, 2, 2, 0},
    {"gl_h", "GL_{2n}(H)", BaseField::quaternion, ModelKind::metadata_only, 4, 3, 0},
}};

// O(p,q) with p != q carries two distinct multiplicities on one root length and
// is outside the class of algebras handled here.
constexpr std::array<std::string_view, 3> kExcluded{"o_pq_unequal", "o_pq", "o_p_q"};

CaseDescriptor make(const TableRow& row, int n, std::optional<int> p) {
  CaseDescriptor c;
  c.case_id = std::string(row.id);
  c.group_name = std::string(row.group);
  c.base_field = row.field;
  c.model_kind = row.kind;
  c.n = n;
  c.d = row.d == kParametric ? p.value_or(1) : row.d;
  c.e = row.e;
  c.ambient_dim = ambient_dim_from_multiplicities(c.n, c.d, c.e);
  c.backend_available = row.kind != ModelKind::metadata_only;
  if (row.d == kParametric) c.family_parameter = p.value_or(1);
  if (row.fixed_rank > 0) c.fixed_rank = row.fixed_rank;
  return c;
}

}  // namespace

int ambient_dim_from_multiplicities(int n, int d, int e) {
  return n * (e + 1) + d * n * (n - 1);
}

std::vector<CaseDescriptor> list_cases(int default_rank) {
  if (default_rank < 1) throw Error(ErrorKind::out_of_range, "rank must be >= 1");
  std::vector<CaseDescriptor> out;
  out.reserve(kTable.size());
  for (const auto& row : kTable) {
    out.push_back(make(row, row.fixed_rank > 0 ? row.fixed_rank : default_rank, std::nullopt));
  }
  return out;
}

CaseDescriptor lookup_case(std::string_view case_id, int n, std::optional<int> family_parameter) {
  if (std::find(kExcluded.begin(), kExcluded.end(), case_id) != kExcluded.end()) {
    throw Error(ErrorKind::admissibility,
                "O(p,q) with p != q has unequal multiplicities on a single root length and is "
                "excluded from the Jordan-algebra classification used here");
  }
  auto it = std::find_if(kTable.begin(), kTable.end(),
                         [&](const TableRow& row) { return row.id == case_id; });
  if (it == kTable.end()) {
    throw Error(ErrorKind::not_found, "unknown case family '" + std::string(case_id) + "'");
  }
  if (n < 1) throw Error(ErrorKind::out_of_range, "rank n must be >= 1");
  if (it->fixed_rank > 0 && n != it->fixed_rank) {
    throw Error(ErrorKind::out_of_range, std::string(case_id) + " has fixed rank " +
                                             std::to_string(it->fixed_rank));
  }
  if (it->d == kParametric) {
    if (family_parameter && *family_parameter < 1) {
      throw Error(ErrorKind::out_of_range, "family parameter p must be >= 1");
    }
  } else if (family_parameter) {
    throw Error(ErrorKind::invalid_argument, std::string(case_id) + " takes no family parameter");
  }
  return make(*it, n, family_parameter);
}

CaseDescriptor sub_case(const CaseDescriptor& c, int k) {
  if (k < 1 || k > c.n) {
    throw Error(ErrorKind::out_of_range, "sub-case rank " + std::to_string(k) + " outside [1, " +
                                             std::to_string(c.n) + "]");
  }
  CaseDescriptor s = c;
  s.n = k;
  s.ambient_dim = ambient_dim_from_multiplicities(k, c.d, c.e);
  // The Peirce subalgebra of a rank-fixed family is no longer that family's table row
  // but keeps (d, e); the rank constraint does not carry over.
  s.fixed_rank.reset();
  return s;
}

double l2_threshold(const CaseDescriptor& c) {
  return -(c.d * (c.n - 1) + (c.e + 1) / 2.0);
}

double equivariance_exponent(const CaseDescriptor& c, int k) {
  if (k < 1 || k > c.n) {
    throw Error(ErrorKind::out_of_range, "orbit rank " + std::to_string(k) + " outside [1, " +
                                             std::to_string(c.n) + "]");
  }
  return 2.0 * c.d * k;
}

double lebesgue_equivariance_exponent(const CaseDescriptor& c) { return 2.0 * c.r(); }

double bessel_parameter(const CaseDescriptor& c) { return (c.d - c.e - 1) / 2.0; }

std::vector<std::string> registry_violations(const CaseDescriptor& c) {
  std::vector<std::string> bad;
  if (c.ambient_dim != ambient_dim_from_multiplicities(c.n, c.d, c.e)) {
    bad.push_back("ambient_dim does not match n(e+1) + d n(n-1)");
  }
  if (c.r() < 1) bad.push_back("r = d(n-1)+(e+1) must be >= 1");
  const bool concrete = c.model_kind != ModelKind::metadata_only;
  if (c.backend_available != concrete) bad.push_back("backend_available inconsistent with model_kind");
  auto it = std::find_if(kTable.begin(), kTable.end(),
                         [&](const TableRow& row) { return row.id == c.case_id; });
  if (it == kTable.end()) {
    bad.push_back("case id not in table");
  } else {
    const int want_d = it->d == kParametric ? c.family_parameter.value_or(-1) : it->d;
    if (c.d != want_d || c.e != it->e) bad.push_back("(d, e) differ from the table row");
  }
  const double lhs = l2_threshold(c);
  const double rhs = -c.r() + (c.e + 1) / 2.0;
  if (lhs != rhs) bad.push_back("l2_threshold != -r + (e+1)/2");
  return bad;
}

}  // namespace jorbit
