#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace biherm::cli {

enum ExitCode : int {
  kOk = 0,           // analysis ran, every asserted check passed
  kCheckFailed = 1,  // analysis ran, a mathematical check failed
  kInputError = 2,   // malformed input or usage error
};

/// Runs one `biherm` invocation. `args` excludes the program name. The report
/// goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biherm::cli
