#pragma once

// Command-line front end: eval, pachner, check, phib.

#include <ostream>
#include <string>
#include <vector>

#include "tqft/qdilog.hpp"

namespace tqft {

/// Stable exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // failed checks or bad command line
  kExitParse = 2,
  kExitValidation = 3,
  kExitConvergence = 4,
  kExitDomain = 5,
};

/// Parses "1", "-0.5", "0.3i", "-i", "1+0.2i", "1-2e-3i".
cd parse_complex(const std::string& text);

/// args excludes the program name. Results go to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tqft
