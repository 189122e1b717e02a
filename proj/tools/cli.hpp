#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcp::cli {

enum ExitCode : int { kOk = 0, kNumerical = 1, kUsage = 2 };

// Runs the command line; stdout/stderr are injectable for tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Writes text to path via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& text);

}  // namespace fcp::cli
