#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "snewton/newton.hpp"

namespace snewton {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitNumeric = 2 };

/// Runs the tool on argv-style arguments (without the program name) and
/// returns the exit code. Reports go to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "inf" when the residual vanishes identically, else the order.
nlohmann::ordered_json residual_json(int order, bool vanishes);

/// Per-run report with stable key order.
nlohmann::ordered_json report_json(const NewtonRun& run, const std::vector<std::string>& names);

}  // namespace snewton
