#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iac
{

/// Process exit codes of `iacheck`.
enum ExitCode : int
{
    exit_ok = 0,        // clean, compatible, or constraint true
    exit_failure = 1,   // diagnostics, incompatible, not composable, or constraint false
    exit_usage = 2      // bad arguments, unreadable or unparsable input, evaluation error
};

/// Environment variable holding the default `--enum-budget`.
constexpr const char* enum_budget_env = "IACHECK_ENUM_BUDGET";

/// Runs the command line `args` (without the program name).
int run_cli( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace iac
