#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hsadapt::cli {

/// Exit codes: 0 success, 1 data or validation error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `hsadapt` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hsadapt::cli
