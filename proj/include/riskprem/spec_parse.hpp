// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "riskprem/funclib.hpp"

namespace riskprem {

// Function specs come in two interchangeable forms:
//
//   compact:  "cara:1.0", "prelec:0.65,1.0", "linear",
//             "composed:power:0.5@prelec:0.65,1"   (transform @ base)
//   JSON:     {"family": "prelec", "params": [0.65, 1.0]}
//             {"family": "composed", "transform": {...}, "base": {...}}
//
// Utility families: linear, cara(a), crra(eta), log, quadratic(b).
// Weighting families: identity, power(theta), prelec(alpha,beta), tk(gamma),
// composed(transform, base). Transforms: power(kappa), exp(c), blend(w,kappa).
//
// All parsers throw ParseError on malformed input; parameter validation
// errors from the constructors propagate unchanged.

[[nodiscard]] UtilityFn parse_utility(std::string_view text);
[[nodiscard]] WeightingFn parse_weighting(std::string_view text);
[[nodiscard]] ConcaveTransform parse_transform(std::string_view text);

[[nodiscard]] UtilityFn utility_from_json(const nlohmann::json& j);
[[nodiscard]] WeightingFn weighting_from_json(const nlohmann::json& j);
[[nodiscard]] ConcaveTransform transform_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::ordered_json to_json(const UtilityFn& f);
[[nodiscard]] nlohmann::ordered_json to_json(const WeightingFn& g);
[[nodiscard]] nlohmann::ordered_json to_json(const ConcaveTransform& t);

/// Accepts either form: text starting with '{' is parsed as JSON.
[[nodiscard]] UtilityFn utility_from_spec(std::string_view text);
[[nodiscard]] WeightingFn weighting_from_spec(std::string_view text);

}  // namespace riskprem
