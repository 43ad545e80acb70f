// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riskprem/comparative.hpp"
#include "riskprem/evalcore.hpp"
#include "riskprem/premia.hpp"

namespace riskprem::cli {

enum class Format { json, csv, table };

[[nodiscard]] Format parse_format(const std::string& name);

struct EvalResult {
    DecisionMaker agent;
    Lottery lottery;
    double value;
    double dual_form_value;
    double certainty_equivalent;
};

struct ConvergenceRow {
    int level;
    double eps;
    double exact;
    double approx;
    double abs_error;
    double normalized_error;  ///< abs_error / eps^power
};

struct ConvergenceStudy {
    std::string premium;
    std::string agent;
    std::string varied;  ///< which epsilon is halved
    int power;
    std::vector<ConvergenceRow> rows;
    std::optional<double> order;  ///< nullopt: exact at every level
};

[[nodiscard]] std::string render_eval(const EvalResult& r, Format f);
[[nodiscard]] std::string render_premia(const DecisionMaker& dm, const PremiumReport& r, Format f);
[[nodiscard]] std::string render_sweep(const DecisionMaker& dm, const std::string& axis,
                                       const std::vector<PremiumReport>& rows, Format f);
[[nodiscard]] std::string render_convergence(const ConvergenceStudy& s, Format f);
[[nodiscard]] std::string render_compare(const ComparisonReport& r, Format f);

}  // namespace riskprem::cli
