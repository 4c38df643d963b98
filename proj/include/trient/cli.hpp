// cli.hpp - command-line front end.
#ifndef TRIENT_CLI_HPP
#define TRIENT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace trient::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kDataError = 3,
  kIoError = 4,
};

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trient::cli

#endif  // TRIENT_CLI_HPP
