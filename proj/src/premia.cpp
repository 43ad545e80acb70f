// SPDX-License-Identifier: MIT
#include "riskprem/premia.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "riskprem/errors.hpp"

namespace riskprem {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct UtilityPoints {
    double down;  // U(x0 - eps1)
    double mid;   // U(x0)
    double up;    // U(x0 + eps1)
};

UtilityPoints utility_points(const UtilityFn& u, double x0, double eps1) {
    return {u.value(x0 - eps1), u.value(x0), u.value(x0 + eps1)};
}

struct WeightPoints {
    double lo;   // h(p0 - eps2)
    double mid;  // h(p0)
    double hi;   // h(p0 + eps2)
};

WeightPoints weight_points(const WeightingFn& h, double p0, double eps2) {
    const ProbabilityBand b = probability_band(p0, eps2);
    return {h.value(b.lo), h.value(b.mid), h.value(b.hi)};
}

double utility_ratio(const UtilityFn& u, double x) { return u.d2(x) / u.d1(x); }
double weighting_ratio(const WeightingFn& h, double p) { return h.d2(p) / h.d1(p); }

}  // namespace

ProbabilityBand probability_band(double p0, double eps2) {
    return {std::max(0.0, p0 - eps2), p0, std::min(1.0, p0 + eps2)};
}

void validate_probability_scenario(double p0, double eps2) {
    if (!(p0 > 0.0 && p0 < 1.0)) {
        throw ScenarioError("scenario: p0=" + num(p0) + " must lie in (0, 1)");
    }
    if (!(eps2 > 0.0)) {
        throw ScenarioError("scenario: eps2=" + num(eps2) + " must be positive");
    }
    if (eps2 > std::min(p0, 1.0 - p0)) {
        throw ScenarioError("scenario: eps2=" + num(eps2) + " exceeds min(p0, 1-p0)=" +
                            num(std::min(p0, 1.0 - p0)));
    }
}

void validate_payoff_scenario(const UtilityFn& u, double x0, double eps1) {
    if (!std::isfinite(x0)) throw ScenarioError("scenario: x0 must be finite");
    if (!(eps1 > 0.0) || !std::isfinite(eps1)) {
        throw ScenarioError("scenario: eps1=" + num(eps1) + " must be positive");
    }
    const Interval dom = u.domain();
    if (!dom.contains(x0 - eps1) || !dom.contains(x0 + eps1)) {
        throw ScenarioError("scenario: x0 +- eps1 = [" + num(x0 - eps1) + ", " + num(x0 + eps1) +
                            "] leaves the domain of utility " + u.to_string());
    }
}

void validate_scenario(const DecisionMaker& dm, const Scenario& s) {
    validate_payoff_scenario(dm.utility, s.x0, s.eps1);
    validate_probability_scenario(s.p0, s.eps2);
}

// ---------------------------------------------------------------------------
// EU
// ---------------------------------------------------------------------------

double eu_risk_premium_exact(const UtilityFn& u, double x0, double eps1) {
    validate_payoff_scenario(u, x0, eps1);
    const UtilityPoints up = utility_points(u, x0, eps1);
    return x0 - u.inverse(0.5 * up.down + 0.5 * up.up);
}

double eu_risk_premium_approx(const UtilityFn& u, double x0, double eps1) {
    validate_payoff_scenario(u, x0, eps1);
    return -0.5 * eps1 * eps1 * utility_ratio(u, x0);
}

double eu_risk_premium_residual(const UtilityFn& u, double x0, double eps1, double pi) {
    const UtilityPoints up = utility_points(u, x0, eps1);
    return u.value(x0 - pi) - (0.5 * up.down + 0.5 * up.up);
}

double eu_probability_premium_exact(const UtilityFn& u, double x0, double eps1) {
    validate_payoff_scenario(u, x0, eps1);
    const UtilityPoints up = utility_points(u, x0, eps1);
    const double spread = up.up - up.down;
    if (!(spread > 0.0)) {
        throw DegenerateError("probability premium: U(x0+eps1) - U(x0-eps1) is not positive");
    }
    return (up.mid - 0.5 * (up.down + up.up)) / spread;
}

double eu_probability_premium_approx(const UtilityFn& u, double x0, double eps1) {
    validate_payoff_scenario(u, x0, eps1);
    return -0.25 * eps1 * utility_ratio(u, x0);
}

double eu_probability_premium_residual(const UtilityFn& u, double x0, double eps1, double gamma) {
    const UtilityPoints up = utility_points(u, x0, eps1);
    return (0.5 - gamma) * up.down + (0.5 + gamma) * up.up - up.mid;
}

// ---------------------------------------------------------------------------
// DT
// ---------------------------------------------------------------------------

double dt_risk_premium_exact(const WeightingFn& h, double p0, double eps2) {
    validate_probability_scenario(p0, eps2);
    const WeightPoints w = weight_points(h, p0, eps2);
    const double spread = w.hi - w.lo;
    if (!(spread > 0.0)) {
        throw DegenerateError("dual risk premium: h(p0+eps2) - h(p0-eps2) is not positive");
    }
    return 0.5 * ((w.mid - w.lo) - (w.hi - w.mid)) / spread;
}

double dt_risk_premium_approx(const WeightingFn& h, double p0, double eps2) {
    validate_probability_scenario(p0, eps2);
    return -0.25 * eps2 * weighting_ratio(h, p0);
}

double dt_risk_premium_residual(const WeightingFn& h, double p0, double eps2, double rho) {
    // payoffs 0, 1/2 - rho, 1 on the three ranks; the outer states cancel
    const WeightPoints w = weight_points(h, p0, eps2);
    return (w.hi - w.lo) * (0.5 - rho) - (w.hi - w.mid);
}

double dt_probability_premium_exact(const WeightingFn& h, double p0, double eps2) {
    validate_probability_scenario(p0, eps2);
    const ProbabilityBand b = probability_band(p0, eps2);
    const WeightPoints w = weight_points(h, p0, eps2);
    const double target = 0.5 * (w.lo + w.hi);
    if (!(target >= w.lo && target <= w.hi)) {
        throw InfeasibleError("dual probability premium: target outside [h(p0-eps2), h(p0+eps2)]");
    }
    const double shifted = h.inverse(target);
    if (!(shifted >= b.lo && shifted <= b.hi)) {
        throw InfeasibleError("dual probability premium: p0 - lambda=" + num(shifted) +
                              " leaves [p0-eps2, p0+eps2]");
    }
    return p0 - shifted;
}

double dt_probability_premium_approx(const WeightingFn& h, double p0, double eps2) {
    validate_probability_scenario(p0, eps2);
    return -0.5 * eps2 * eps2 * weighting_ratio(h, p0);
}

double dt_probability_premium_residual(const WeightingFn& h, double p0, double eps2, double lambda) {
    const WeightPoints w = weight_points(h, p0, eps2);
    const double shifted = std::clamp(p0 - lambda, 0.0, 1.0);
    return 0.5 * (w.lo - 2.0 * h.value(shifted) + w.hi);
}

// ---------------------------------------------------------------------------
// RDU
// ---------------------------------------------------------------------------

double rdu_risk_premium_exact(const DecisionMaker& dm, const Scenario& s) {
    validate_scenario(dm, s);
    const WeightPoints w = weight_points(dm.weighting, s.p0, s.eps2);
    const UtilityPoints up = utility_points(dm.utility, s.x0, s.eps1);
    const double d_lo = w.mid - w.lo;
    const double d_hi = w.hi - w.mid;
    if (!(d_lo + d_hi > 0.0)) {
        throw DegenerateError("RDU risk premium: h(p0+eps2) - h(p0-eps2) is not positive");
    }
    // convex combination, so the target lies in [U(x0-e1), U(x0+e1)]
    const double w_hi = d_hi / (d_lo + d_hi);
    const double target = up.down + w_hi * (up.up - up.down);
    return s.x0 - dm.utility.inverse(target);
}

double rdu_risk_premium_approx(const DecisionMaker& dm, const Scenario& s) {
    validate_scenario(dm, s);
    return -0.5 * s.eps1 * s.eps2 * weighting_ratio(dm.weighting, s.p0) -
           0.5 * s.eps1 * s.eps1 * utility_ratio(dm.utility, s.x0);
}

double rdu_risk_premium_residual(const DecisionMaker& dm, const Scenario& s, double sigma) {
    const WeightPoints w = weight_points(dm.weighting, s.p0, s.eps2);
    const UtilityPoints up = utility_points(dm.utility, s.x0, s.eps1);
    return (w.hi - w.lo) * dm.utility.value(s.x0 - sigma) -
           ((w.mid - w.lo) * up.down + (w.hi - w.mid) * up.up);
}

double rdu_probability_premium_exact(const DecisionMaker& dm, const Scenario& s) {
    validate_scenario(dm, s);
    const ProbabilityBand b = probability_band(s.p0, s.eps2);
    const WeightPoints w = weight_points(dm.weighting, s.p0, s.eps2);
    const UtilityPoints up = utility_points(dm.utility, s.x0, s.eps1);
    const double spread = up.up - up.down;
    if (!(spread > 0.0)) {
        throw DegenerateError("RDU probability premium: U(x0+eps1) - U(x0-eps1) is not positive");
    }
    const double v_up = (up.up - up.mid) / spread;
    const double target = w.lo + v_up * (w.hi - w.lo);
    if (!(target >= w.lo && target <= w.hi)) {
        throw InfeasibleError("RDU probability premium: target " + num(target) +
                              " outside [h(p0-eps2), h(p0+eps2)]");
    }
    const double shifted = dm.weighting.inverse(target);
    if (!(shifted >= b.lo && shifted <= b.hi)) {
        throw InfeasibleError("RDU probability premium: p0 - mu=" + num(shifted) +
                              " leaves [p0-eps2, p0+eps2]");
    }
    return s.p0 - shifted;
}

double rdu_probability_premium_approx(const DecisionMaker& dm, const Scenario& s) {
    validate_scenario(dm, s);
    return -0.5 * s.eps2 * s.eps2 * weighting_ratio(dm.weighting, s.p0) -
           0.5 * s.eps1 * s.eps2 * utility_ratio(dm.utility, s.x0);
}

double rdu_probability_premium_residual(const DecisionMaker& dm, const Scenario& s, double mu) {
    const WeightPoints w = weight_points(dm.weighting, s.p0, s.eps2);
    const UtilityPoints up = utility_points(dm.utility, s.x0, s.eps1);
    const double h_shift = dm.weighting.value(std::clamp(s.p0 - mu, 0.0, 1.0));
    return (w.hi - w.lo) * up.mid - ((h_shift - w.lo) * up.down + (w.hi - h_shift) * up.up);
}

// ---------------------------------------------------------------------------
// Indexes and sensitivities
// ---------------------------------------------------------------------------

LocalIndexes local_indexes(const DecisionMaker& dm, double x0, double p0) {
    return {dm.utility.absolute_risk_aversion(x0), dm.weighting.dual_index(p0)};
}

double sensitivity_sigma_eps1(const DecisionMaker& dm, const Scenario& s, double sigma) {
    validate_scenario(dm, s);
    const WeightPoints w = weight_points(dm.weighting, s.p0, s.eps2);
    const double spread = w.hi - w.lo;
    const double w_lo = (w.mid - w.lo) / spread;
    const double w_hi = (w.hi - w.mid) / spread;
    const UtilityFn& u = dm.utility;
    return (w_lo * u.d1(s.x0 - s.eps1) - w_hi * u.d1(s.x0 + s.eps1)) / u.d1(s.x0 - sigma);
}

double sensitivity_mu_eps2(const DecisionMaker& dm, const Scenario& s, double mu) {
    validate_scenario(dm, s);
    const UtilityPoints up = utility_points(dm.utility, s.x0, s.eps1);
    const double spread = up.up - up.down;
    const double v_lo = (up.mid - up.down) / spread;
    const double v_hi = (up.up - up.mid) / spread;
    const WeightingFn& h = dm.weighting;
    return (v_lo * h.d1(s.p0 - s.eps2) - v_hi * h.d1(s.p0 + s.eps2)) / h.d1(s.p0 - mu);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

double PremiumResiduals::max_abs() const noexcept {
    return std::max({std::abs(pi), std::abs(gamma), std::abs(rho), std::abs(lambda), std::abs(sigma),
                     std::abs(mu)});
}

double LinkDeltas::max_abs() const noexcept {
    return std::max({std::abs(pi_gamma), std::abs(lambda_rho), std::abs(sigma_sum), std::abs(mu_sum),
                     std::abs(sigma_mu)});
}

PremiumReport premium_report(const DecisionMaker& dm, const Scenario& s) {
    validate_scenario(dm, s);
    const UtilityFn& u = dm.utility;
    const WeightingFn& h = dm.weighting;

    PremiumReport r;
    r.scenario = s;
    r.pi = {eu_risk_premium_exact(u, s.x0, s.eps1), eu_risk_premium_approx(u, s.x0, s.eps1)};
    r.gamma = {eu_probability_premium_exact(u, s.x0, s.eps1),
               eu_probability_premium_approx(u, s.x0, s.eps1)};
    r.rho = {dt_risk_premium_exact(h, s.p0, s.eps2), dt_risk_premium_approx(h, s.p0, s.eps2)};
    r.lambda = {dt_probability_premium_exact(h, s.p0, s.eps2),
                dt_probability_premium_approx(h, s.p0, s.eps2)};
    r.sigma = {rdu_risk_premium_exact(dm, s), rdu_risk_premium_approx(dm, s)};
    r.mu = {rdu_probability_premium_exact(dm, s), rdu_probability_premium_approx(dm, s)};

    const LocalIndexes idx = local_indexes(dm, s.x0, s.p0);
    r.ara = idx.ara;
    r.dual_index = idx.dual_index;

    r.residuals.pi = eu_risk_premium_residual(u, s.x0, s.eps1, r.pi.exact);
    r.residuals.gamma = eu_probability_premium_residual(u, s.x0, s.eps1, r.gamma.exact);
    r.residuals.rho = dt_risk_premium_residual(h, s.p0, s.eps2, r.rho.exact);
    r.residuals.lambda = dt_probability_premium_residual(h, s.p0, s.eps2, r.lambda.exact);
    r.residuals.sigma = rdu_risk_premium_residual(dm, s, r.sigma.exact);
    r.residuals.mu = rdu_probability_premium_residual(dm, s, r.mu.exact);

    const double e1 = s.eps1;
    const double e2 = s.eps2;
    r.links.pi_gamma = r.pi.approx - 2.0 * e1 * r.gamma.approx;
    r.links.lambda_rho = r.lambda.approx - 2.0 * e2 * r.rho.approx;
    r.links.sigma_sum = r.sigma.approx - (r.pi.approx + 2.0 * e1 * r.rho.approx);
    r.links.mu_sum = r.mu.approx - (2.0 * e2 * r.gamma.approx + r.lambda.approx);
    r.links.sigma_mu = r.sigma.approx - (e1 / e2) * r.mu.approx;

    // algebraic identities of the formulas above: anything past rounding is a bug
    const double scale = 1.0 + std::abs(r.sigma.approx) + std::abs(r.mu.approx) +
                         std::abs(r.pi.approx) + std::abs(r.lambda.approx);
    if (r.links.max_abs() > 1e-10 * scale) {
        throw Error("premium report: approximation link identity violated by " +
                    num(r.links.max_abs()));
    }
    return r;
}

}  // namespace riskprem
