// SPDX-License-Identifier: MIT
#include "riskprem/spec_parse.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <string>
#include <variant>
#include <vector>

#include "riskprem/errors.hpp"

namespace riskprem {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text, std::string_view context) {
    const std::string s(trim(text));
    if (s.empty()) {
        throw ParseError("'" + std::string(context) + "': empty parameter");
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw ParseError("'" + std::string(context) + "': parameter '" + s + "' is not a number");
    }
    return v;
}

std::vector<double> parse_params(std::string_view text, std::string_view context) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        out.push_back(parse_number(text.substr(start, comma - start), context));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct FamilySpec {
    std::string family;
    std::vector<double> params;
};

// "name" or "name:p1,p2"
FamilySpec split_family(std::string_view text) {
    text = trim(text);
    const std::size_t colon = text.find(':');
    FamilySpec spec;
    spec.family = std::string(trim(text.substr(0, colon)));
    if (spec.family.empty()) {
        throw ParseError("'" + std::string(text) + "': missing family name");
    }
    if (colon != std::string_view::npos) {
        spec.params = parse_params(text.substr(colon + 1), text);
    }
    return spec;
}

void expect_arity(const FamilySpec& spec, std::size_t n) {
    if (spec.params.size() != n) {
        throw ParseError("family '" + spec.family + "' expects " + std::to_string(n) +
                         " parameter(s), got " + std::to_string(spec.params.size()));
    }
}

UtilityFn make_utility(const FamilySpec& s) {
    if (s.family == "linear") {
        expect_arity(s, 0);
        return UtilityFn::linear();
    }
    if (s.family == "cara") {
        expect_arity(s, 1);
        return UtilityFn::cara(s.params[0]);
    }
    if (s.family == "crra") {
        expect_arity(s, 1);
        return UtilityFn::crra(s.params[0]);
    }
    if (s.family == "log") {
        expect_arity(s, 0);
        return UtilityFn::log();
    }
    if (s.family == "quadratic") {
        expect_arity(s, 1);
        return UtilityFn::quadratic(s.params[0]);
    }
    throw ParseError("unknown utility family '" + s.family + "'");
}

ConcaveTransform make_transform(const FamilySpec& s) {
    if (s.family == "power") {
        expect_arity(s, 1);
        return ConcaveTransform::power(s.params[0]);
    }
    if (s.family == "exp" || s.family == "exponential") {
        expect_arity(s, 1);
        return ConcaveTransform::exponential(s.params[0]);
    }
    if (s.family == "blend" || s.family == "affine_blend") {
        expect_arity(s, 2);
        return ConcaveTransform::affine_blend(s.params[0], s.params[1]);
    }
    throw ParseError("unknown transform family '" + s.family + "'");
}

WeightingFn make_weighting(const FamilySpec& s) {
    if (s.family == "identity") {
        expect_arity(s, 0);
        return WeightingFn::identity();
    }
    if (s.family == "power") {
        expect_arity(s, 1);
        return WeightingFn::power(s.params[0]);
    }
    if (s.family == "prelec") {
        expect_arity(s, 2);
        return WeightingFn::prelec(s.params[0], s.params[1]);
    }
    if (s.family == "tk" || s.family == "tversky_kahneman") {
        expect_arity(s, 1);
        return WeightingFn::tversky_kahneman(s.params[0]);
    }
    throw ParseError("unknown weighting family '" + s.family + "'");
}

FamilySpec family_from_json(const json& j, std::string_view what) {
    if (!j.is_object()) {
        throw ParseError(std::string(what) + ": expected a JSON object or spec string");
    }
    const auto fam = j.find("family");
    if (fam == j.end() || !fam->is_string()) {
        throw ParseError(std::string(what) + ": missing string field 'family'");
    }
    FamilySpec spec;
    spec.family = fam->get<std::string>();
    if (const auto params = j.find("params"); params != j.end()) {
        if (!params->is_array()) {
            throw ParseError(std::string(what) + ": field 'params' must be an array");
        }
        for (const auto& v : *params) {
            if (!v.is_number()) {
                throw ParseError(std::string(what) + ": non-numeric entry in 'params'");
            }
            spec.params.push_back(v.get<double>());
        }
    }
    return spec;
}

template <class Fn>
auto parse_json_text(std::string_view text, Fn&& convert) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON function spec: ") + e.what());
    }
    return convert(j);
}

}  // namespace

UtilityFn parse_utility(std::string_view text) { return make_utility(split_family(text)); }

ConcaveTransform parse_transform(std::string_view text) { return make_transform(split_family(text)); }

WeightingFn parse_weighting(std::string_view text) {
    text = trim(text);
    const std::size_t colon = text.find(':');
    if (trim(text.substr(0, colon)) == "composed") {
        if (colon == std::string_view::npos) {
            throw ParseError("'composed' expects '<transform>@<base>'");
        }
        const std::string_view rest = text.substr(colon + 1);
        const std::size_t at = rest.find('@');
        if (at == std::string_view::npos) {
            throw ParseError("'" + std::string(text) + "': composed spec needs '<transform>@<base>'");
        }
        return WeightingFn::composed(parse_transform(rest.substr(0, at)),
                                     parse_weighting(rest.substr(at + 1)));
    }
    return make_weighting(split_family(text));
}

UtilityFn utility_from_json(const json& j) {
    if (j.is_string()) return parse_utility(j.get<std::string>());
    return make_utility(family_from_json(j, "utility"));
}

ConcaveTransform transform_from_json(const json& j) {
    if (j.is_string()) return parse_transform(j.get<std::string>());
    return make_transform(family_from_json(j, "transform"));
}

WeightingFn weighting_from_json(const json& j) {
    if (j.is_string()) return parse_weighting(j.get<std::string>());
    const FamilySpec spec = family_from_json(j, "weighting");
    if (spec.family == "composed") {
        const auto t = j.find("transform");
        const auto b = j.find("base");
        if (t == j.end() || b == j.end()) {
            throw ParseError("weighting: composed needs 'transform' and 'base'");
        }
        return WeightingFn::composed(transform_from_json(*t), weighting_from_json(*b));
    }
    return make_weighting(spec);
}

UtilityFn utility_from_spec(std::string_view text) {
    if (trim(text).starts_with('{')) return parse_json_text(text, utility_from_json);
    return parse_utility(text);
}

WeightingFn weighting_from_spec(std::string_view text) {
    if (trim(text).starts_with('{')) return parse_json_text(text, weighting_from_json);
    return parse_weighting(text);
}

ordered_json to_json(const UtilityFn& f) {
    ordered_json j;
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, utility::Linear>) {
                j = {{"family", "linear"}, {"params", ordered_json::array()}};
            } else if constexpr (std::is_same_v<T, utility::Cara>) {
                j = {{"family", "cara"}, {"params", {fam.a}}};
            } else if constexpr (std::is_same_v<T, utility::Crra>) {
                j = {{"family", "crra"}, {"params", {fam.eta}}};
            } else if constexpr (std::is_same_v<T, utility::Log>) {
                j = {{"family", "log"}, {"params", ordered_json::array()}};
            } else {
                j = {{"family", "quadratic"}, {"params", {fam.b}}};
            }
        },
        f.family());
    return j;
}

ordered_json to_json(const ConcaveTransform& t) {
    ordered_json j;
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, transform::Power>) {
                j = {{"family", "power"}, {"params", {fam.kappa}}};
            } else if constexpr (std::is_same_v<T, transform::Exponential>) {
                j = {{"family", "exp"}, {"params", {fam.c}}};
            } else {
                j = {{"family", "blend"}, {"params", {fam.weight, fam.kappa}}};
            }
        },
        t.family());
    return j;
}

ordered_json to_json(const WeightingFn& g) {
    ordered_json j;
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, weighting::Identity>) {
                j = {{"family", "identity"}, {"params", ordered_json::array()}};
            } else if constexpr (std::is_same_v<T, weighting::Power>) {
                j = {{"family", "power"}, {"params", {fam.theta}}};
            } else if constexpr (std::is_same_v<T, weighting::Prelec>) {
                j = {{"family", "prelec"}, {"params", {fam.alpha, fam.beta}}};
            } else if constexpr (std::is_same_v<T, weighting::TverskyKahneman>) {
                j = {{"family", "tk"}, {"params", {fam.gamma}}};
            } else {
                j["family"] = "composed";
                j["transform"] = to_json(fam.transform);
                j["base"] = to_json(*fam.base);
            }
        },
        g.family());
    return j;
}

}  // namespace riskprem
