#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chisq::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kValidation = 2,
  kNumerical = 3,
  kUnsupported = 4,
  kDegenerateGamma = 5,
};

// args excludes the program name. Subcommands: moments, density, selftest, validate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chisq::cli
