#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jorbit/case_registry.hpp"
#include "jorbit/models.hpp"
#include "jorbit/report.hpp"

namespace jorbit {

/// Matrix literal: {"field": "real" | "complex", "rows": [[...], ...]}. Complex entries are
/// [re, im] pairs; plain numbers are accepted in complex literals. Throws Error{parse}.
CMatrix parse_matrix_literal(std::string_view text);
std::string format_matrix_literal(const CMatrix& m, BaseField field);

/// A literal as an element of the case. The literal must already satisfy the model's shape
/// constraint (size, field, symmetry) to 1e-12; throws Error{shape_mismatch} otherwise.
AlgebraElement parse_element_literal(const CaseDescriptor& c, std::string_view text);

/// The case table as aligned text, CSV, or a JSON document with schema "jorbit.cases/1".
std::string emit_cases(const std::vector<CaseDescriptor>& cases, ReportFormat format);

}  // namespace jorbit
