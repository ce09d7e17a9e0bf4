#pragma once

#include "magspec/config.hpp"

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace magspec {

/// Subcommands in the order `all` runs them.
const std::vector<std::string>& subcommands();

/// Exit codes of run().
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitError = 3 };

/// Runs one subcommand, writing reports under cfg.output.dir and one summary
/// line per step to `log`. Errors are caught and written as failure.json.
int run(const std::string& subcommand, const ScenarioConfig& cfg, std::ostream& log);

/// Machine-readable failure record; written to `dir`/failure.json when `dir`
/// is not empty, and returned as text.
std::string write_failure(const std::string& dir, const std::string& command, const std::exception& e);

}  // namespace magspec
