#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pickchoose::cli {

enum ExitCode { kOk = 0, kViolations = 1, kUsage = 2 };

// Entry point of the pickchoose tool. argv[0] is the program name.
// Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace pickchoose::cli
