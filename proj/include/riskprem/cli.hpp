// SPDX-License-Identifier: MIT
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace riskprem {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCompute = 1;
inline constexpr int kExitInput = 2;

/// Runs one command line (without the program name). Results go to `out`
/// unless --out names a file; warnings and the single-line error reason go
/// to `err`. Returns the process exit code.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riskprem
