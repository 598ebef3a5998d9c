#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pshave::cli {

/// Exit codes: 0 success, 1 invalid input, 2 model or solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitModel = 2;

/// Runs one `pshave` invocation. `args` excludes the program name. Results go
/// to `out` (or the --out file); diagnostics go to `err` prefixed with
/// `error[<Code>]: `.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Same, bound to std::cout / std::cerr.
int run_cli(const std::vector<std::string>& args);

}  // namespace pshave::cli
