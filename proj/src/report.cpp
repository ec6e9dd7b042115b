#include "jorbit/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "jorbit/errors.hpp"

namespace jorbit {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::skipped: return "skipped";
  }
  return "inconclusive";
}

Verdict parse_verdict(std::string_view text) {
  for (Verdict v : {Verdict::pass, Verdict::fail, Verdict::inconclusive, Verdict::skipped}) {
    if (to_string(v) == text) return v;
  }
  throw Error(ErrorKind::parse, "unknown verdict '" + std::string(text) + "'");
}

Verdict scalar_verdict(double predicted, double measured, double tolerance) {
  if (!std::isfinite(predicted) || !std::isfinite(measured)) return Verdict::fail;
  if (predicted == 0.0) return std::abs(measured) <= tolerance ? Verdict::pass : Verdict::fail;
  return std::abs(measured / predicted - 1.0) <= tolerance ? Verdict::pass : Verdict::fail;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "text") return ReportFormat::text;
  throw Error(ErrorKind::parse, "unknown format '" + std::string(text) + "' (json|csv|text)");
}

namespace {

ojson to_json(const ReportValue& v) {
  return std::visit(
      [](const auto& x) -> ojson {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return x;
        }
      },
      v);
}

ReportValue from_json(const ojson& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw Error(ErrorKind::parse, "unsupported report value: " + j.dump());
}

std::string shortest(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string value_text(const ReportValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return shortest(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          return std::to_string(x);
        }
      },
      v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string params_text(const VerificationReport& r) {
  std::string out;
  for (const auto& [k, v] : r.parameters) {
    if (!out.empty()) out += ';';
    out += k + "=" + value_text(v);
  }
  return out;
}

}  // namespace

int exit_code(const std::vector<VerificationReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::fail) return 1;
    if (r.verdict == Verdict::inconclusive) inconclusive = true;
  }
  return inconclusive ? 2 : 0;
}

std::string emit_report(const std::vector<VerificationReport>& reports, ReportFormat format) {
  if (format == ReportFormat::json) {
    ojson doc;
    doc["schema"] = "jorbit.reports/1";
    ojson arr = ojson::array();
    std::int64_t counts[4] = {0, 0, 0, 0};
    for (const auto& r : reports) {
      ojson j;
      j["claim_id"] = r.claim_id;
      j["case_id"] = r.case_id;
      ojson params = ojson::object();
      for (const auto& [k, v] : r.parameters) params[k] = to_json(v);
      j["parameters"] = params;
      j["predicted"] = to_json(r.predicted);
      j["measured"] = to_json(r.measured);
      j["tolerance"] = r.tolerance;
      j["std_error"] = r.std_error ? ojson(*r.std_error) : ojson(nullptr);
      j["verdict"] = std::string(to_string(r.verdict));
      j["seed"] = r.seed;
      j["runtime_seconds"] = r.runtime_seconds;
      j["anchor"] = r.anchor;
      j["notes"] = r.notes;
      arr.push_back(std::move(j));
      ++counts[static_cast<int>(r.verdict)];
    }
    doc["reports"] = std::move(arr);
    doc["summary"] = {{"total", static_cast<std::int64_t>(reports.size())},
                      {"pass", counts[0]},
                      {"fail", counts[1]},
                      {"inconclusive", counts[2]},
                      {"skipped", counts[3]},
                      {"exit_code", exit_code(reports)}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  if (format == ReportFormat::csv) {
    os << "claim_id,case_id,parameters,predicted,measured,tolerance,std_error,verdict,seed,runtime_seconds,anchor\n";
    for (const auto& r : reports) {
      os << csv_field(r.claim_id) << ',' << csv_field(r.case_id) << ',' << csv_field(params_text(r)) << ','
         << csv_field(value_text(r.predicted)) << ',' << csv_field(value_text(r.measured)) << ','
         << shortest(r.tolerance) << ',' << (r.std_error ? shortest(*r.std_error) : "") << ','
         << to_string(r.verdict) << ',' << r.seed << ',' << shortest(r.runtime_seconds) << ','
         << csv_field(r.anchor) << '\n';
    }
    return os.str();
  }
  std::size_t wc = 8, wcase = 4;
  for (const auto& r : reports) {
    wc = std::max(wc, r.claim_id.size());
    wcase = std::max(wcase, r.case_id.size());
  }
  os << std::left << std::setw(static_cast<int>(wc)) << "claim" << "  " << std::setw(static_cast<int>(wcase)) << "case"
     << "  " << std::setw(14) << "verdict" << std::setw(24) << "predicted" << std::setw(24) << "measured"
     << "parameters\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(static_cast<int>(wc)) << r.claim_id << "  " << std::setw(static_cast<int>(wcase))
       << r.case_id << "  " << std::setw(14) << to_string(r.verdict) << std::setw(24) << value_text(r.predicted)
       << std::setw(24) << value_text(r.measured) << params_text(r) << '\n';
    if (!r.notes.empty()) os << "    " << r.notes << '\n';
  }
  std::size_t npass = std::count_if(reports.begin(), reports.end(), [](auto& r) { return r.verdict == Verdict::pass; });
  os << npass << "/" << reports.size() << " passed\n";
  return os.str();
}

std::vector<VerificationReport> parse_json_reports(std::string_view document) {
  ojson doc;
  try {
    doc = ojson::parse(document);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::parse, std::string("invalid report json: ") + e.what());
  }
  std::vector<VerificationReport> out;
  try {
    for (const auto& j : doc.at("reports")) {
      VerificationReport r;
      r.claim_id = j.at("claim_id").get<std::string>();
      r.case_id = j.at("case_id").get<std::string>();
      for (const auto& [k, v] : j.at("parameters").items()) r.parameters.emplace_back(k, from_json(v));
      r.predicted = from_json(j.at("predicted"));
      r.measured = from_json(j.at("measured"));
      r.tolerance = j.at("tolerance").get<double>();
      if (!j.at("std_error").is_null()) r.std_error = j.at("std_error").get<double>();
      r.verdict = parse_verdict(j.at("verdict").get<std::string>());
      r.seed = j.at("seed").get<std::uint64_t>();
      r.runtime_seconds = j.at("runtime_seconds").get<double>();
      r.anchor = j.at("anchor").get<std::string>();
      r.notes = j.value("notes", std::string());
      out.push_back(std::move(r));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed report json: ") + e.what());
  }
  return out;
}

Stopwatch::Stopwatch()
    : start_ns_(std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now().time_since_epoch())
                    .count()) {}

double Stopwatch::seconds() const {
  const auto now = std::chrono::duration_cast<std::chrono::nanoseconds>(
                       std::chrono::steady_clock::now().time_since_epoch())
                       .count();
  return static_cast<double>(now - start_ns_) * 1e-9;
}

}  // namespace jorbit
