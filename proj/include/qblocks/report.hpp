#pragma once

// Structured run reports and their JSON, CSV and text forms. Every number
// is held as a decimal string, so a parsed report compares equal to the one
// that was emitted.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qblocks {

inline constexpr const char* kVersionString = "qblocks 0.1.0";
inline constexpr int kReportSchema = 1;

struct CheckResult {
  std::string name;
  std::string lhs_source, rhs_source;
  std::string lhs_re, lhs_im, rhs_re, rhs_im;
  std::string abs_error, tolerance;
  bool pass = false;
  bool operator==(const CheckResult&) const = default;
};

struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool operator==(const ReportTable&) const = default;
};

/// A block series: exponent = num/denom, coefficient = coeff_num/coeff_den.
struct SeriesPayload {
  std::string denom;
  std::vector<std::vector<std::string>> terms;
  std::optional<std::string> cutoff;
  std::string prefactor_exponent;
  bool operator==(const SeriesPayload&) const = default;
};

struct VerificationReport {
  std::string version = kVersionString;
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> results;
  std::vector<CheckResult> checks;
  std::map<std::string, ReportTable> tables;
  std::optional<SeriesPayload> series;
  std::vector<std::string> notes;
  /// pass | fail | non_convergent
  std::string status = "pass";
  std::optional<std::string> wall_time;
  bool operator==(const VerificationReport&) const = default;
};

/// Sorted keys, two-space indentation, trailing newline.
std::string emit_json(const VerificationReport& report);
VerificationReport parse_report_json(const std::string& text);
/// RFC 4180 quoting where needed, '\n' line ends.
std::string emit_csv(const ReportTable& table);
std::string emit_text(const VerificationReport& report);

/// The checks of a report as a table with the fixed column list below.
ReportTable checks_table(const VerificationReport& report);
inline const std::vector<std::string>& check_columns() {
  static const std::vector<std::string> c{"name",      "lhs_source", "lhs_re",    "lhs_im", "rhs_source",
                                         "rhs_re",    "rhs_im",     "abs_error", "tolerance", "pass"};
  return c;
}

}  // namespace qblocks
