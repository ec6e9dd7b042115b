#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jorbit {

enum class ErrorKind {
  not_found,
  admissibility,
  unsupported_backend,
  out_of_range,
  shape_mismatch,
  case_mismatch,
  singular,
  capability,
  poisoned_sample,
  invalid_argument,
  parse,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace jorbit
