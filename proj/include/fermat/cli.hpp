#pragma once

namespace fermat::cli {

// Entry point for the fermatsc command-line tool.  Parses argv, runs the
// selected subcommand and returns the process exit code (0 on success).
int dispatch(int argc, const char* const* argv);

}  // namespace fermat::cli
