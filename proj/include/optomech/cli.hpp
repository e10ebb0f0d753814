#pragma once

#include <iosfwd>

#include "optomech/errors.hpp"

namespace optomech::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoConvergence = 3;
inline constexpr int kExitUnstable = 4;
inline constexpr int kExitIo = 5;

int exit_code(ErrorKind kind);

/// Entry point of the command-line tool: entangle, sweep, chain, steady-state,
/// dump-matrices. Results go to files or `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optomech::cli
