#ifndef MBW_TOOLS_CLI_HPP
#define MBW_TOOLS_CLI_HPP

#include <ostream>

namespace mbw::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kInvalidInput = 2, kNoConvergence = 3 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mbw::cli

#endif  // MBW_TOOLS_CLI_HPP
