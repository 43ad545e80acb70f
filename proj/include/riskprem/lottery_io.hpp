// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <string_view>

#include "riskprem/evalcore.hpp"

namespace riskprem {

/// JSON array of {"x": payoff, "p": probability}.
[[nodiscard]] Lottery lottery_from_json_text(std::string_view text);

/// CSV with a header naming columns x and p (any order), one state per line.
/// Errors carry the offending line number and field name.
[[nodiscard]] Lottery lottery_from_csv_text(std::string_view text);

/// Dispatches on the first non-blank character: '[' means JSON, else CSV.
[[nodiscard]] Lottery lottery_from_text(std::string_view text);

[[nodiscard]] Lottery load_lottery(const std::string& path);

}  // namespace riskprem
