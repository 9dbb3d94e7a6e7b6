#pragma once

#include <iosfwd>

#include "liesym/error.hpp"

namespace liesym {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,  // not closed, not integrable, residual over tolerance
  kExitParse = 2,
  kExitPole = 3,
  kExitUsage = 64,
};

int exit_code_for(const Error& e);

// Runs `liesym <subcommand> ...`; all output goes to out/err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace liesym
