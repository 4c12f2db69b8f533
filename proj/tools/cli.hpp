#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kong::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kWellFormedness = 3,
    kContradiction = 4,
    kTimeout = 5,
};

/// Runs one command line (args excludes the program name). Results go to
/// `out` unless written to a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace kong::cli
