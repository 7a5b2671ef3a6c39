#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pbm {

inline constexpr std::string_view kToolName = "pbmfix";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Entry point behind the pbmfix binary; `args` excludes the program name.
///
/// Exit codes: 0 success, 1 a check or the solver failed, 2 usage, parse or
/// I/O error. A human summary goes to `out`, diagnostics to `err`, and the
/// JSON report to the --report path when given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbm
