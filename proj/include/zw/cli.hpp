#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zw {

/** Exit codes of the command-line tool. */
enum ExitCode : int {
  kExitOk = 0,
  /** eq: diagrams differ; check-axioms / minimality / bridge: a check failed. */
  kExitNegative = 1,
  /** Usage errors and library errors; a JSON error object goes to `err`. */
  kExitError = 2,
};

/**
 * Runs `zw` with the given arguments (without the program name). Commands:
 * interpret, normalize, eq, check-axioms, minimality, bridge, render.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/** "3" or "2..5" as an inclusive range; throws RangeViolation otherwise. */
std::pair<int, int> parse_int_range(const std::string& text);

}  // namespace zw
