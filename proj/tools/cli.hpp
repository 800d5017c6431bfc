#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfbsde::cli {

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`. Returns the
/// process exit status: 0 on success, nonzero on usage, configuration or
/// validation failure.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Environment variable holding the directory that relative --out paths
/// resolve against.
inline constexpr const char* kOutputDirEnv = "QFBSDE_OUTPUT_DIR";

}  // namespace qfbsde::cli
