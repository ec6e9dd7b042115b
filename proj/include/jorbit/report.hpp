#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace jorbit {

enum class Verdict { pass, fail, inconclusive, skipped };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

/// Scalar-or-verdict payload of a report field. Strings carry dichotomy verdicts
/// ("finite", "divergent") or labels.
using ReportValue = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

/// One checked claim. `anchor` names the statement under test in neutral words; it is
/// empty only for plumbing self-tests.
struct VerificationReport {
  std::string claim_id;
  std::string case_id;
  std::vector<std::pair<std::string, ReportValue>> parameters;
  ReportValue predicted;
  ReportValue measured;
  double tolerance = 0.0;
  std::optional<double> std_error;
  Verdict verdict = Verdict::inconclusive;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  std::string anchor;
  std::string notes;

  VerificationReport& param(std::string key, ReportValue v) {
    parameters.emplace_back(std::move(key), std::move(v));
    return *this;
  }

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// pass if |measured/predicted - 1| <= tolerance, else fail.
Verdict scalar_verdict(double predicted, double measured, double tolerance);

enum class ReportFormat { json, csv, text };
ReportFormat parse_report_format(std::string_view text);

std::string emit_report(const std::vector<VerificationReport>& reports, ReportFormat format);
/// Inverse of emit_report(..., json).
std::vector<VerificationReport> parse_json_reports(std::string_view document);

/// Exit status for a batch of reports: 0 when every non-skipped report passes, 1 on any
/// failure, 2 when the only problems are inconclusive reports.
int exit_code(const std::vector<VerificationReport>& reports);

/// Wall-clock stopwatch for runtime_seconds.
class Stopwatch {
 public:
  Stopwatch();
  double seconds() const;

 private:
  std::int64_t start_ns_;
};

}  // namespace jorbit
