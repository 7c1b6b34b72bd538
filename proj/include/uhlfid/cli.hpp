#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uhlfid/verify.hpp"

namespace uhlfid {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitPropertyFailure = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitUsage = 64,
};

struct CliHooks {
  /// When set, `verify` evaluates fidelities through this instead of the library.
  FidelityEvaluator evaluator;
};

/// Runs one command line. `args` excludes the program name. Normal output
/// goes to `out`, diagnostics to `err`; the return value is the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliHooks& hooks = {});

}  // namespace uhlfid
