#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wpc/io.hpp"

namespace wpc {

enum class OutputFormat { kJson, kCsv };

struct RunConfig {
  /// analyze, metric, operators, grunsky, counterexample, flow, welding-check or sweep.
  std::string command;
  /// Map specs as given on the command line (inline JSON or @file).
  std::string map, map2;
  /// Overrides the grid of the map specs when set.
  std::optional<long> grid;
  long trunc = 32;
  Real alpha = 2;
  TrendThresholds thresholds;
  bool assert_verdicts = false;
  OutputFormat format = OutputFormat::kJson;
  std::string out;
  bool no_meta = false;

  // grunsky: coefficients c_2, c_3, ... of f = z + c_2 z^2 + ..., as numbers or [re, im].
  std::string poly;
  // sweep: params[param] runs over `steps` evenly spaced values in [from, to].
  std::string param;
  Real from = 0, to = 0;
  int steps = 0;
};

inline constexpr long kDefaultGrid = 4096;

/// Throws InvalidArgument unless the grid is a power of two, K <= N/8 and the
/// tolerances are positive.
void validate(const RunConfig& config);

struct RunResult {
  Json report;
  /// Rows for --csv, header included.
  std::string csv;
  /// All --assert checks held and no numerical flag was raised.
  bool passed = true;
};

/// Runs one command. Numerical flags (aliasing, branch, degenerate
/// derivative) are recorded in report["flags"] and fail the verdict; spec and
/// usage errors throw.
RunResult run(const RunConfig& config);

/// Writes the report and returns the exit status: 0 ok, 1 error, 2 when
/// --assert is given and a verdict fails.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and calls execute.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Text appended to --help: map-spec schema and CSV columns.
std::string help_footer();

}  // namespace wpc
