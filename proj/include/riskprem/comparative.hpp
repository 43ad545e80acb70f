// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "riskprem/evalcore.hpp"
#include "riskprem/funclib.hpp"
#include "riskprem/premia.hpp"

namespace riskprem {

// Numerical checks that agent 2 is more risk averse than agent 1. Five
// conditions are checked, each of which is equivalent to the others for
// smooth agents:
//
//   index_dominance               -h2''/h2' >= -h1''/h1' (and -U2''/U2' >= -U1''/U1')
//   risk_premium_dominance        rho2 >= rho1, or sigma2 >= sigma1 under RDU
//   probability_premium_dominance lambda2 >= lambda1, or mu2 >= mu1 under RDU
//   concave_composition           h2(h1^-1(t)) (and U2(U1^-1(t))) concave
//   cross_ratio                   [f2(s)-f2(r)]/[f2(q)-f2(p)] <= same for f1, p<q<=r<s
//
// The checks run on finite grids, so a "holds" verdict is a statement about
// the grid, not a proof.

inline constexpr double kComparisonSlack = 1e-9;
inline constexpr double kPremiumDominanceTol = 1e-10;

enum class Verdict {
    holds,
    holds_marginal,  ///< no violation beyond the slack, but some point within it
    fails,
};

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;

struct WitnessCoord {
    std::string name;
    double value;
};

struct ConditionResult {
    std::string name;
    Verdict verdict = Verdict::holds;
    double worst_margin = 0.0;  ///< min over points of (required side - other side)
    std::size_t points = 0;
    /// First violating point in grid order; empty unless the verdict is fails.
    std::vector<WitnessCoord> witness;

    [[nodiscard]] bool holds() const noexcept { return verdict != Verdict::fails; }
};

struct Quadruple {
    double p, q, r, s;  ///< p < q <= r < s
};

/// Stratified random quadruples on [lo, hi] plus a few deterministic
/// edge-adjacent ones. Deterministic for a given seed.
[[nodiscard]] std::vector<Quadruple> sample_quadruples(double lo, double hi, std::size_t n,
                                                       std::uint64_t seed);

/// n equally spaced interior points of [lo, hi]: lo + (hi-lo) i/(n+1).
[[nodiscard]] std::vector<double> interior_grid(double lo, double hi, std::size_t n);

// -- weighting side ---------------------------------------------------------

[[nodiscard]] ConditionResult check_index_dominance(const WeightingFn& h2, const WeightingFn& h1,
                                                    std::span<const double> p_grid);

struct ProbabilityScenario {
    double p0;
    double eps2;
};

struct PremiumDominance {
    ConditionResult risk;
    ConditionResult probability;
};

/// rho and lambda of agent 2 against agent 1 at every (p0, eps2).
[[nodiscard]] PremiumDominance check_premium_dominance_dt(const WeightingFn& h2, const WeightingFn& h1,
                                                          std::span<const ProbabilityScenario> grid);

/// Second differences of h2(h1^-1(t)) on n interior points of (0, 1).
[[nodiscard]] ConditionResult check_concave_composition(const WeightingFn& h2, const WeightingFn& h1,
                                                        std::size_t n);

[[nodiscard]] ConditionResult check_cross_ratio(const WeightingFn& h2, const WeightingFn& h1,
                                                std::span<const Quadruple> sample);

// -- utility side -----------------------------------------------------------

[[nodiscard]] ConditionResult check_index_dominance(const UtilityFn& u2, const UtilityFn& u1,
                                                    std::span<const double> x_grid);

/// Second differences of U2(U1^-1(t)) on n interior points of [U1(lo), U1(hi)].
[[nodiscard]] ConditionResult check_concave_composition(const UtilityFn& u2, const UtilityFn& u1,
                                                        double x_lo, double x_hi, std::size_t n);

[[nodiscard]] ConditionResult check_cross_ratio(const UtilityFn& u2, const UtilityFn& u1,
                                                std::span<const Quadruple> sample);

/// sigma and mu of agent 2 against agent 1 at every scenario.
[[nodiscard]] PremiumDominance check_premium_dominance_rdu(const DecisionMaker& dm2,
                                                           const DecisionMaker& dm1,
                                                           std::span<const Scenario> grid);

// -- full comparison --------------------------------------------------------

struct ComparisonGrids {
    std::size_t interior_points = 401;
    std::vector<double> p0_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> eps2_values = {0.01, 0.05};
    bool include_max_eps2 = true;  ///< also eps2 = min(p0, 1 - p0)
    std::vector<double> eps1_values = {0.01, 0.1, 0.5};
    std::vector<double> x0_values;  ///< empty: three points chosen inside both domains
    std::size_t quadruple_samples = 2000;
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Three initial wealth levels that keep x0 +- max_eps1 inside `domain`.
/// Throws GridError if the domain is too narrow.
[[nodiscard]] std::vector<double> domain_safe_x0(const Interval& domain, double max_eps1);

[[nodiscard]] std::vector<ProbabilityScenario> probability_scenario_grid(const ComparisonGrids& g);
[[nodiscard]] std::vector<Scenario> scenario_grid(const ComparisonGrids& g, const Interval& domain);

struct ComparisonReport {
    std::string agent2;
    std::string agent1;
    bool dual_only = false;  ///< both utilities linear: weighting conditions only
    std::vector<ConditionResult> conditions;
    std::size_t interior_points = 0;
    std::size_t scenarios = 0;
    std::size_t quadruples = 0;
    double x_lo = 0.0;  ///< payoff window of the utility checks
    double x_hi = 0.0;
    double slack = kComparisonSlack;
    double premium_tol = kPremiumDominanceTol;

    [[nodiscard]] bool all_hold() const noexcept;
    [[nodiscard]] bool all_fail() const noexcept;
    /// All five verdicts agree (marginal counts as holding).
    [[nodiscard]] bool consistent() const noexcept { return all_hold() || all_fail(); }
};

/// Runs all five conditions for "dm2 more risk averse than dm1". When both
/// utilities are linear only the weighting clauses are checked. Throws
/// GridError for empty or unusable grids.
[[nodiscard]] ComparisonReport compare_aversion(const DecisionMaker& dm2, const DecisionMaker& dm1,
                                                const ComparisonGrids& grids = {});

[[nodiscard]] nlohmann::ordered_json to_json(const ComparisonReport& report);
[[nodiscard]] std::string to_table(const ComparisonReport& report);

}  // namespace riskprem
