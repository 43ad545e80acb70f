// SPDX-License-Identifier: MIT
#pragma once

#include <string>

namespace riskprem {

/// printf("%.*g") with the given number of significant digits.
[[nodiscard]] std::string format_sig(double v, int digits);

/// v rounded to `digits` significant digits (for JSON emission, where the
/// serializer prints the shortest round-trip form of the rounded value).
[[nodiscard]] double round_sig(double v, int digits);

inline constexpr int kMachineDigits = 12;  // CSV / JSON
inline constexpr int kTableDigits = 6;

}  // namespace riskprem
