#pragma once

// Configuration loading and subcommand dispatch for the qblocks executable.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qblocks/liealg.hpp"
#include "qblocks/mpreal.hpp"
#include "qblocks/rational.hpp"
#include "qblocks/report.hpp"
#include "qblocks/seifert.hpp"

namespace qblocks {

enum class OutputFormat { json, csv, text };
OutputFormat parse_output_format(const std::string& s);
std::string to_string(OutputFormat f);

// Exit codes beyond the library error kinds
inline constexpr int kExitCheckFailed = 4;
inline constexpr int kExitIo = 5;

struct RunConfig {
  std::string command;
  std::optional<CartanLabel> algebra;
  std::vector<SeifertPair> seifert;
  std::optional<std::int64_t> level;
  Precision precision = kDefaultPrecision;
  /// Block: inner exponent bound (default 10). Verify: overrides the derived series cutoff.
  std::optional<Rational> cutoff;
  /// Defaults per command: verify 1e-6, gauss and wrt 1e-10.
  std::optional<double> tolerance;
  ValidationMode validation = ValidationMode::relaxed;
  OutputFormat format = OutputFormat::json;
  std::int64_t coset_cap = CosetEnumerator::kDefaultCap;
  std::size_t max_roots = 6;
  std::int64_t exact_order_cap = 2000;
  int workers = 1;
  std::string schedule = "geometric:0.1,2,12";
  std::optional<double> tail_tolerance;
  bool exact = false;
  bool prefactor = true;
  std::string source = "both";
  std::int64_t max_m = 100;
  std::optional<std::string> emit_table;
  std::optional<std::string> output;
  bool timing = false;
};

/// Thrown by load_config for --help and --version; carries the text to print.
struct HelpRequested {
  std::string text;
};

/// Defaults, then QBLOCKS_PRECISION, then the TOML file named by --config,
/// then flags. `args` excludes the program name. `env_precision` stands in
/// for the environment variable when given.
RunConfig load_config(const std::vector<std::string>& args,
                      std::optional<std::string> env_precision = std::nullopt);

/// Runs one subcommand; library errors propagate as qblocks::Error.
VerificationReport run(const RunConfig& config);

/// 0 when every check passes, 3 on non-convergence, 4 on a failed check.
int exit_code(const VerificationReport& report);

/// Serializes the report in the configured format.
std::string render(const VerificationReport& report, OutputFormat format);

/// Full entry point: parse, run, write outputs, map errors onto exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qblocks
