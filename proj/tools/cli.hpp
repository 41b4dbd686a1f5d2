#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skintrack::cli {

/// Runs the command line with args[0] as the program name. Machine-readable
/// `key=value` results go to `out`, diagnostics to `err`. Returns the exit
/// status: 0 iff no error was reported.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace skintrack::cli
