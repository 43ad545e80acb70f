// SPDX-License-Identifier: MIT
#pragma once

#include "riskprem/evalcore.hpp"
#include "riskprem/funclib.hpp"

namespace riskprem {

/// Small-risk construction: initial wealth x0, a middle state at p0 holding
/// probability mass 2*eps2, and an added +-eps1 payoff risk.
///
/// Valid when 0 < p0 < 1, 0 < eps2 <= min(p0, 1 - p0), eps1 > 0 and
/// x0 +- eps1 lie inside the utility domain. The low and high outer states
/// of the construction cancel from every premium equation, so they are not
/// represented.
struct Scenario {
    double x0 = 0.0;
    double p0 = 0.5;
    double eps1 = 0.1;
    double eps2 = 0.25;
};

/// p0 - eps2, p0, p0 + eps2, clamped into [0, 1] against rounding.
struct ProbabilityBand {
    double lo;
    double mid;
    double hi;
};

[[nodiscard]] ProbabilityBand probability_band(double p0, double eps2);

/// Throw ScenarioError naming the violated constraint.
void validate_probability_scenario(double p0, double eps2);
void validate_payoff_scenario(const UtilityFn& u, double x0, double eps1);
void validate_scenario(const DecisionMaker& dm, const Scenario& s);

// -- Expected utility: symmetric +-eps1 risk at probability 1/2 -------------

/// pi solving U(x0 - pi) = U(x0 - eps1)/2 + U(x0 + eps1)/2.
[[nodiscard]] double eu_risk_premium_exact(const UtilityFn& u, double x0, double eps1);
/// -eps1^2 U''(x0) / (2 U'(x0))
[[nodiscard]] double eu_risk_premium_approx(const UtilityFn& u, double x0, double eps1);
[[nodiscard]] double eu_risk_premium_residual(const UtilityFn& u, double x0, double eps1, double pi);

/// gamma solving U(x0) = (1/2 - gamma) U(x0 - eps1) + (1/2 + gamma) U(x0 + eps1),
/// in closed form since the equation is linear in gamma.
[[nodiscard]] double eu_probability_premium_exact(const UtilityFn& u, double x0, double eps1);
/// -eps1 U''(x0) / (4 U'(x0))
[[nodiscard]] double eu_probability_premium_approx(const UtilityFn& u, double x0, double eps1);
[[nodiscard]] double eu_probability_premium_residual(const UtilityFn& u, double x0, double eps1,
                                                     double gamma);

// -- Dual theory: payoffs 0, 1/2, 1 with a +-1/2 risk of mass 2*eps2 --------

/// Closed-form dual risk premium
///   rho = [(h(p0) - h(p0-e)) - (h(p0+e) - h(p0))] / (2 [h(p0+e) - h(p0-e)]).
[[nodiscard]] double dt_risk_premium_exact(const WeightingFn& h, double p0, double eps2);
/// -eps2 h''(p0) / (4 h'(p0))
[[nodiscard]] double dt_risk_premium_approx(const WeightingFn& h, double p0, double eps2);
[[nodiscard]] double dt_risk_premium_residual(const WeightingFn& h, double p0, double eps2, double rho);

/// lambda solving h(p0 - lambda) = [h(p0 - eps2) + h(p0 + eps2)] / 2.
[[nodiscard]] double dt_probability_premium_exact(const WeightingFn& h, double p0, double eps2);
/// -eps2^2 h''(p0) / (2 h'(p0))
[[nodiscard]] double dt_probability_premium_approx(const WeightingFn& h, double p0, double eps2);
[[nodiscard]] double dt_probability_premium_residual(const WeightingFn& h, double p0, double eps2,
                                                     double lambda);

// -- Rank-dependent utility: both perturbations at once ---------------------

/// sigma solving
///   [h(p0+e2) - h(p0-e2)] U(x0 - sigma)
///     = [h(p0) - h(p0-e2)] U(x0 - e1) + [h(p0+e2) - h(p0)] U(x0 + e1).
[[nodiscard]] double rdu_risk_premium_exact(const DecisionMaker& dm, const Scenario& s);
/// -e1 e2 h''/(2h') - e1^2 U''/(2U')
[[nodiscard]] double rdu_risk_premium_approx(const DecisionMaker& dm, const Scenario& s);
[[nodiscard]] double rdu_risk_premium_residual(const DecisionMaker& dm, const Scenario& s, double sigma);

/// mu solving
///   [h(p0+e2) - h(p0-e2)] U(x0)
///     = [h(p0-mu) - h(p0-e2)] U(x0 - e1) + [h(p0+e2) - h(p0-mu)] U(x0 + e1).
/// Throws InfeasibleError if p0 - mu would leave [p0 - e2, p0 + e2].
[[nodiscard]] double rdu_probability_premium_exact(const DecisionMaker& dm, const Scenario& s);
/// -e2^2 h''/(2h') - e1 e2 U''/(2U')
[[nodiscard]] double rdu_probability_premium_approx(const DecisionMaker& dm, const Scenario& s);
[[nodiscard]] double rdu_probability_premium_residual(const DecisionMaker& dm, const Scenario& s,
                                                      double mu);

struct LocalIndexes {
    double ara;         ///< -U''(x0)/U'(x0)
    double dual_index;  ///< -h''(p0)/h'(p0)
};

[[nodiscard]] LocalIndexes local_indexes(const DecisionMaker& dm, double x0, double p0);

/// d sigma / d eps1 from the total differential of the sigma equation,
/// evaluated at a solution `sigma` of that equation.
[[nodiscard]] double sensitivity_sigma_eps1(const DecisionMaker& dm, const Scenario& s, double sigma);

/// d mu / d eps2 at a solution `mu`. Needs h' at p0 +- eps2, so eps2 must be
/// strictly below min(p0, 1 - p0); otherwise DomainError.
[[nodiscard]] double sensitivity_mu_eps2(const DecisionMaker& dm, const Scenario& s, double mu);

struct PremiumPair {
    double exact = 0.0;
    double approx = 0.0;

    [[nodiscard]] double delta() const noexcept { return exact - approx; }
};

struct PremiumResiduals {
    double pi = 0.0;
    double gamma = 0.0;
    double rho = 0.0;
    double lambda = 0.0;
    double sigma = 0.0;
    double mu = 0.0;

    [[nodiscard]] double max_abs() const noexcept;
};

/// Deviations of the second-order approximations from the algebraic links
/// between them; zero up to rounding.
struct LinkDeltas {
    double pi_gamma = 0.0;     ///< pi - 2 e1 gamma
    double lambda_rho = 0.0;   ///< lambda - 2 e2 rho
    double sigma_sum = 0.0;    ///< sigma - (pi + 2 e1 rho)
    double mu_sum = 0.0;       ///< mu - (2 e2 gamma + lambda)
    double sigma_mu = 0.0;     ///< sigma - (e1/e2) mu

    [[nodiscard]] double max_abs() const noexcept;
};

struct PremiumReport {
    Scenario scenario;
    PremiumPair pi, gamma, rho, lambda, sigma, mu;
    double ara = 0.0;
    double dual_index = 0.0;
    PremiumResiduals residuals;
    LinkDeltas links;
};

/// Every premium, both indexes, residuals and link deltas for one agent.
[[nodiscard]] PremiumReport premium_report(const DecisionMaker& dm, const Scenario& s);

}  // namespace riskprem
