// SPDX-License-Identifier: MIT
// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "riskprem/comparative.hpp"
#include "riskprem/errors.hpp"
#include "riskprem/evalcore.hpp"
#include "riskprem/numerics.hpp"
#include "riskprem/premia.hpp"

using namespace riskprem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

DecisionMaker agent(UtilityFn u, WeightingFn h) {
    DecisionMaker dm;
    dm.utility = std::move(u);
    dm.weighting = std::move(h);
    return dm;
}

// ---------------------------------------------------------------------------

void residuals_and_links() {
    std::mt19937_64 rng(1001);
    double worst_residual = 0.0, worst_link = 0.0;
    int errors = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 1000; ++i) {
        const DecisionMaker dm = gen::agent(rng);
        const Scenario s = gen::scenario(dm.utility, rng);
        try {
            const PremiumReport r = premium_report(dm, s);
            worst_residual = std::max(worst_residual, r.residuals.max_abs());
            worst_link = std::max(worst_link, r.links.max_abs());
        } catch (const Error& e) {
            ++errors;
            std::printf("  error for %s: %s\n", dm.describe().c_str(), e.what());
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, errors == 0 && worst_residual < 1e-10 && secs < 10.0, "indifference residuals, 1000 random agents",
           "max |residual| " + sci(worst_residual) + " (< 1e-10), " + sci(secs) + " s (< 10 s), " +
               std::to_string(errors) + " errors");
    report(2, errors == 0 && worst_link <= 1e-14, "approximation link identities",
           "max |delta| " + sci(worst_link) + " (<= 1e-14)");
}

void reductions() {
    std::mt19937_64 rng(1003);
    double worst = 0.0;
    std::size_t cases = 0;
    const ComparisonGrids grids;
    for (int i = 0; i < 40; ++i) {
        const DecisionMaker dm = gen::agent(rng);
        for (const Scenario& s : scenario_grid(grids, dm.utility.domain())) {
            DecisionMaker eu = dm, dt = dm;
            eu.weighting = WeightingFn::identity();
            dt.utility = UtilityFn::linear();
            const double pi = eu_risk_premium_exact(dm.utility, s.x0, s.eps1);
            const double gamma = eu_probability_premium_exact(dm.utility, s.x0, s.eps1);
            const double rho = dt_risk_premium_exact(dm.weighting, s.p0, s.eps2);
            const double lambda = dt_probability_premium_exact(dm.weighting, s.p0, s.eps2);
            worst = std::max({worst, std::abs(rdu_risk_premium_exact(eu, s) - pi),
                              std::abs(rdu_risk_premium_exact(dt, s) - 2 * s.eps1 * rho),
                              std::abs(rdu_probability_premium_exact(eu, s) - 2 * s.eps2 * gamma),
                              std::abs(rdu_probability_premium_exact(dt, s) - lambda)});
            ++cases;
        }
    }
    report(3, worst < 1e-10, "reductions to EU and DT",
           "max deviation " + sci(worst) + " (< 1e-10) over " + std::to_string(cases) + " scenarios");
}

void anchors() {
    const UtilityFn cara = UtilityFn::cara(1.0);
    const WeightingFn sq = WeightingFn::power(2.0);

    const double pi_ref = oracle::risk_premium_eu(cara, 0.0, 0.1);
    const double lambda_ref = oracle::probability_premium_dt(sq, 0.5, 0.25);
    // gamma: U(0) = (1/2 - g) U(-e) + (1/2 + g) U(e) is linear in g; solve by bisection anyway
    const double gamma_ref = oracle::bisect(
        [&](double g) { return (0.5 - g) * cara.value(-0.1) + (0.5 + g) * cara.value(0.1) - cara.value(0.0); },
        -0.5, 0.5);
    const double rho_ref = oracle::bisect(
        [&](double r) {
            return (sq.value(0.75) - sq.value(0.25)) * (0.5 - r) - (sq.value(0.75) - sq.value(0.5));
        },
        -0.5, 0.5);

    const double pi = eu_risk_premium_exact(cara, 0.0, 0.1);
    const double gamma = eu_probability_premium_exact(cara, 0.0, 0.1);
    const double rho = dt_risk_premium_exact(sq, 0.5, 0.25);
    const double lambda = dt_probability_premium_exact(sq, 0.5, 0.25);

    const bool ok = std::abs(pi - std::log(std::cosh(0.1))) <= 1e-7 && std::abs(pi - pi_ref) <= 1e-7 &&
                    std::abs(gamma - 2.49792e-2) <= 1e-7 && std::abs(gamma - gamma_ref) <= 1e-7 &&
                    std::abs(rho - (-0.125)) <= 1e-12 && std::abs(rho_ref - (-0.125)) <= 1e-12 &&
                    std::abs(lambda - (-5.90170e-2)) <= 1e-7 && std::abs(lambda - lambda_ref) <= 1e-7;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "pi=%.10g gamma=%.10g rho=%.15g lambda=%.10g", pi, gamma, rho, lambda);
    report(4, ok, "numeric anchors", buf);
}

struct Study {
    std::vector<double> normalized;
    std::optional<double> order;
};

Study study(const std::function<std::pair<double, double>(double)>& at, double eps0, int power) {
    Study s;
    std::vector<ScaledError> errs;
    double eps = eps0;
    for (int level = 0; level < 5; ++level, eps *= 0.5) {
        const auto [exact, approx] = at(eps);
        const double err = std::abs(exact - approx);
        errs.push_back({eps, err});
        s.normalized.push_back(err / std::pow(eps, power));
    }
    s.order = convergence_order(errs);
    return s;
}

bool decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

void convergence() {
    const UtilityFn cara = UtilityFn::cara(1.0);
    const WeightingFn root = WeightingFn::power(0.5);
    const Study pi = study(
        [&](double e) { return std::pair{eu_risk_premium_exact(cara, 0, e), eu_risk_premium_approx(cara, 0, e)}; },
        0.1, 2);
    const Study gamma = study(
        [&](double e) {
            return std::pair{eu_probability_premium_exact(cara, 0, e), eu_probability_premium_approx(cara, 0, e)};
        },
        0.1, 1);
    const Study lambda = study(
        [&](double e) {
            return std::pair{dt_probability_premium_exact(root, 0.5, e), dt_probability_premium_approx(root, 0.5, e)};
        },
        0.25, 2);
    const bool ok = pi.order && *pi.order >= 3.5 && gamma.order && *gamma.order >= 2.5 && lambda.order &&
                    *lambda.order >= 2.5 && decreasing(pi.normalized) && decreasing(gamma.normalized) &&
                    decreasing(lambda.normalized);
    const auto show = [](const std::optional<double>& o) { return o ? sci(*o) : std::string("exact"); };
    report(5, ok, "convergence orders over four halvings",
           "pi " + show(pi.order) + " (>= 3.5), gamma " + show(gamma.order) + " (>= 2.5), lambda " +
               show(lambda.order) + " (>= 2.5), normalized errors decreasing: " +
               (decreasing(pi.normalized) && decreasing(gamma.normalized) && decreasing(lambda.normalized)
                    ? "yes"
                    : "no"));
}

void sensitivities() {
    std::mt19937_64 rng(1006);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const DecisionMaker dm = gen::agent(rng);
        const Scenario s = gen::scenario(dm.utility, rng, 0.95);
        const double sigma = rdu_risk_premium_exact(dm, s);
        const double mu = rdu_probability_premium_exact(dm, s);
        const double fd_sigma = oracle::fd1(
            [&](double e) {
                Scenario t = s;
                t.eps1 = e;
                return rdu_risk_premium_exact(dm, t);
            },
            s.eps1, 1e-5 * s.eps1);
        const double fd_mu = oracle::fd1(
            [&](double e) {
                Scenario t = s;
                t.eps2 = e;
                return rdu_probability_premium_exact(dm, t);
            },
            s.eps2, 1e-5 * s.eps2);
        worst = std::max({worst,
                          std::abs(sensitivity_sigma_eps1(dm, s, sigma) - fd_sigma) / std::max(std::abs(fd_sigma), 1e-3),
                          std::abs(sensitivity_mu_eps2(dm, s, mu) - fd_mu) / std::max(std::abs(fd_mu), 1e-3)});
    }
    report(6, worst < 1e-5, "sensitivities against finite differences",
           "max relative deviation " + sci(worst) + " (< 1e-5) on 100 scenarios");
}

// Same family, strictly larger absolute risk aversion everywhere.
UtilityFn more_averse(const UtilityFn& u, std::mt19937_64& rng) {
    const double d = gen::uniform(rng, 0.3, 1.5);
    return std::visit(
        [&](const auto& fam) -> UtilityFn {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, utility::Linear>) {
                return UtilityFn::cara(d);
            } else if constexpr (std::is_same_v<T, utility::Cara>) {
                const double a = fam.a + d;
                return UtilityFn::cara(std::abs(a) < 0.05 ? a + 0.1 : a);
            } else if constexpr (std::is_same_v<T, utility::Crra>) {
                return UtilityFn::crra(fam.eta + d);
            } else if constexpr (std::is_same_v<T, utility::Log>) {
                return UtilityFn::crra(1.0 + d);
            } else {
                return UtilityFn::quadratic(fam.b * (1.0 + d));
            }
        },
        u.family());
}

void aversion_sweeps() {
    std::mt19937_64 rng(1007);
    int forward_ok = 0, reverse_ok = 0, consistent = 0, total = 0;
    const auto run = [&](const DecisionMaker& base, const DecisionMaker& averse) {
        const ComparisonReport fwd = compare_aversion(averse, base);
        const ComparisonReport rev = compare_aversion(base, averse);
        bool rev_witness = rev.all_fail();
        for (const auto& c : rev.conditions) rev_witness = rev_witness && !c.witness.empty();
        forward_ok += fwd.all_hold();
        reverse_ok += rev_witness;
        consistent += fwd.consistent() && rev.consistent();
        ++total;
        if (!fwd.all_hold() || !rev_witness) {
            std::printf("  pair %s  vs  %s\n", averse.describe().c_str(), base.describe().c_str());
            for (const auto& c : fwd.conditions) {
                std::printf("    fwd %-30s %s %.3g\n", c.name.c_str(), std::string(to_string(c.verdict)).c_str(),
                            c.worst_margin);
            }
            for (const auto& c : rev.conditions) {
                std::printf("    rev %-30s %s %.3g\n", c.name.c_str(), std::string(to_string(c.verdict)).c_str(),
                            c.worst_margin);
            }
        }
    };
    for (int i = 0; i < 20; ++i) {
        const WeightingFn h = gen::base_weighting(rng);
        run(agent(UtilityFn::linear(), h), agent(UtilityFn::linear(), concavify(h, gen::transform(rng))));
    }
    for (int i = 0; i < 10; ++i) {
        const UtilityFn u = gen::utility(rng);
        const WeightingFn h = gen::base_weighting(rng);
        run(agent(u, h), agent(more_averse(u, rng), concavify(h, gen::transform(rng))));
    }
    report(7, forward_ok == total && reverse_ok == total && consistent == total,
           "comparative aversion sweeps (20 weighting + 10 agent pairs)",
           "forward all hold " + std::to_string(forward_ok) + "/" + std::to_string(total) +
               ", reversed all fail with witness " + std::to_string(reverse_ok) + "/" + std::to_string(total) +
               ", consistent " + std::to_string(consistent) + "/" + std::to_string(total));
}

void evaluation() {
    std::mt19937_64 rng(1008);
    double worst = 0.0;
    bool degenerate_exact = true;
    for (int i = 0; i < 1000; ++i) {
        const DecisionMaker dm = gen::agent(rng);
        const std::size_t n = 1 + rng() % 10;
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& v : w) total += (v = gen::uniform(rng, 0.05, 1.0));
        std::vector<State> states;
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double p = k + 1 == n ? 1.0 - acc : w[k] / total;
            acc += p;
            states.push_back({gen::scenario(dm.utility, rng).x0, p});
        }
        const Lottery l(states);
        worst = std::max(worst, std::abs(evaluate_rdu(dm, l) - evaluate_dual_form(dm, l)));

        const double c = states.front().payoff;
        const Lottery d = Lottery::degenerate(c);
        degenerate_exact = degenerate_exact && evaluate_rdu(dm, d) == dm.utility.value(c) &&
                           evaluate_dual_form(dm, d) == dm.utility.value(c);
    }
    report(8, worst < 1e-12 && degenerate_exact, "cumulative vs decumulative evaluation",
           "max |difference| " + sci(worst) + " (< 1e-12) on 1000 lotteries, degenerate exact: " +
               (degenerate_exact ? "yes" : "no"));
}

}  // namespace

int main() {
    const std::vector<std::pair<int, void (*)()>> criteria{
        {1, residuals_and_links}, {3, reductions},    {4, anchors},     {5, convergence},
        {6, sensitivities},       {7, aversion_sweeps}, {8, evaluation},
    };
    for (const auto& [id, fn] : criteria) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, false, "unexpected exception", e.what());
        }
    }
    std::printf("%s: %d criterion check(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
