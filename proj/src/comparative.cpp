// SPDX-License-Identifier: MIT
#include "riskprem/comparative.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "riskprem/errors.hpp"
#include "riskprem/format.hpp"
#include "riskprem/spec_parse.hpp"

namespace riskprem {

namespace {

constexpr double kWeightingEdge = 1e-4;

// Accumulates margins for one condition. A margin is (required-larger side)
// minus (other side); the condition fails where margin < -slack.
class MarginTracker {
public:
    explicit MarginTracker(std::string name) { result_.name = std::move(name); }

    template <class MakeWitness>
    void add(double margin, double slack, MakeWitness&& make_witness) {
        ++result_.points;
        if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
        result_.worst_margin = std::min(result_.worst_margin, margin);
        if (margin < -slack) {
            if (!failed_) {
                failed_ = true;
                result_.witness = make_witness();
            }
        } else if (margin <= slack) {
            marginal_ = true;
        }
    }

    [[nodiscard]] ConditionResult finish() {
        result_.verdict = failed_ ? Verdict::fails : marginal_ ? Verdict::holds_marginal : Verdict::holds;
        return result_;
    }

private:
    ConditionResult result_{.name = {}, .verdict = Verdict::holds,
                            .worst_margin = std::numeric_limits<double>::infinity(), .points = 0,
                            .witness = {}};
    bool failed_ = false;
    bool marginal_ = false;
};

// Conjunction of a utility clause and a weighting clause.
ConditionResult combine(const ConditionResult& utility_part, const ConditionResult& weighting_part) {
    ConditionResult out;
    out.name = weighting_part.name;
    out.points = utility_part.points + weighting_part.points;
    out.worst_margin = std::min(utility_part.worst_margin, weighting_part.worst_margin);
    if (utility_part.verdict == Verdict::fails) {
        out.verdict = Verdict::fails;
        out.witness = utility_part.witness;
    } else if (weighting_part.verdict == Verdict::fails) {
        out.verdict = Verdict::fails;
        out.witness = weighting_part.witness;
    } else if (utility_part.verdict == Verdict::holds_marginal ||
               weighting_part.verdict == Verdict::holds_marginal) {
        out.verdict = Verdict::holds_marginal;
    } else {
        out.verdict = Verdict::holds;
    }
    return out;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_grids(const ComparisonGrids& g) {
    if (g.interior_points < 3) throw GridError("grids: need at least 3 interior points");
    if (g.quadruple_samples == 0) throw GridError("grids: quadruple sample is empty");
    if (g.p0_values.empty()) throw GridError("grids: p0 list is empty");
    if (g.eps1_values.empty()) throw GridError("grids: eps1 list is empty");
    if (g.eps2_values.empty() && !g.include_max_eps2) throw GridError("grids: eps2 list is empty");
    for (double p0 : g.p0_values) {
        if (!(p0 > 0.0 && p0 < 1.0)) throw GridError("grids: p0 values must lie in (0, 1)");
    }
    for (double e : g.eps1_values) {
        if (!(e > 0.0) || !std::isfinite(e)) throw GridError("grids: eps1 values must be positive");
    }
    for (double e : g.eps2_values) {
        if (!(e > 0.0)) throw GridError("grids: eps2 values must be positive");
    }
}

template <class F>
double cross_ratio(const F& f, const Quadruple& x) {
    return (f(x.s) - f(x.r)) / (f(x.q) - f(x.p));
}

template <class F2, class F1>
ConditionResult cross_ratio_check(const F2& f2, const F1& f1, std::span<const Quadruple> sample) {
    MarginTracker t("cross_ratio");
    for (const Quadruple& x : sample) {
        const double lhs = cross_ratio(f2, x);
        const double rhs = cross_ratio(f1, x);
        t.add(rhs - lhs, kComparisonSlack * std::max(1.0, std::abs(rhs)), [&] {
            return std::vector<WitnessCoord>{{"p", x.p}, {"q", x.q}, {"r", x.r}, {"s", x.s},
                                             {"ratio2", lhs}, {"ratio1", rhs}};
        });
    }
    return t.finish();
}

// Second differences of composed values at equally spaced abscissae.
ConditionResult concavity_check(std::span<const double> t, std::span<const double> g) {
    MarginTracker tr("concave_composition");
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        const double d2 = g[i - 1] - 2.0 * g[i] + g[i + 1];
        tr.add(-d2, kComparisonSlack, [&] {
            return std::vector<WitnessCoord>{{"t_left", t[i - 1]}, {"t", t[i]}, {"t_right", t[i + 1]},
                                             {"second_difference", d2}};
        });
    }
    return tr.finish();
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::holds:
            return "holds";
        case Verdict::holds_marginal:
            return "holds (marginal)";
        case Verdict::fails:
            return "fails";
    }
    return "?";
}

std::vector<double> interior_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n + 1);
    }
    return g;
}

std::vector<Quadruple> sample_quadruples(double lo, double hi, std::size_t n, std::uint64_t seed) {
    if (!(hi > lo)) throw GridError("quadruple sample: empty interval");
    std::mt19937_64 rng(seed);
    const double w = hi - lo;
    std::vector<Quadruple> out;
    out.reserve(n + 6);
    for (std::size_t k = 0; k < n; ++k) {
        std::array<double, 4> u{(static_cast<double>(k) + uniform01(rng)) / static_cast<double>(n),
                                uniform01(rng), uniform01(rng), uniform01(rng)};
        std::sort(u.begin(), u.end());
        if (k % 4 == 3) u[2] = u[1];  // adjacent intervals, q == r
        Quadruple x{lo + w * u[0], lo + w * u[1], lo + w * u[2], lo + w * u[3]};
        if (x.p < x.q && x.q <= x.r && x.r < x.s) out.push_back(x);
    }
    const double d = 1e-3 * w;
    const double mid = lo + 0.5 * w;
    const std::array<Quadruple, 6> edges{{
        {lo, lo + d, lo + d, hi},
        {lo, hi - d, hi - d, hi},
        {lo, lo + d, hi - d, hi},
        {mid - d, mid, mid, mid + d},
        {lo, lo + d, lo + 2 * d, lo + 3 * d},
        {hi - 3 * d, hi - 2 * d, hi - d, hi},
    }};
    out.insert(out.end(), edges.begin(), edges.end());
    return out;
}

// ---------------------------------------------------------------------------
// weighting side
// ---------------------------------------------------------------------------

ConditionResult check_index_dominance(const WeightingFn& h2, const WeightingFn& h1,
                                      std::span<const double> p_grid) {
    if (p_grid.empty()) throw GridError("index dominance: empty probability grid");
    MarginTracker t("index_dominance");
    for (double p : p_grid) {
        const double i2 = h2.dual_index(p);
        const double i1 = h1.dual_index(p);
        t.add(i2 - i1, kComparisonSlack, [&] {
            return std::vector<WitnessCoord>{{"p", p}, {"index2", i2}, {"index1", i1}};
        });
    }
    return t.finish();
}

PremiumDominance check_premium_dominance_dt(const WeightingFn& h2, const WeightingFn& h1,
                                            std::span<const ProbabilityScenario> grid) {
    if (grid.empty()) throw GridError("premium dominance: empty scenario grid");
    MarginTracker risk("risk_premium_dominance");
    MarginTracker prob("probability_premium_dominance");
    for (const auto& s : grid) {
        const double rho2 = dt_risk_premium_exact(h2, s.p0, s.eps2);
        const double rho1 = dt_risk_premium_exact(h1, s.p0, s.eps2);
        risk.add(rho2 - rho1, kPremiumDominanceTol, [&] {
            return std::vector<WitnessCoord>{{"p0", s.p0}, {"eps2", s.eps2}, {"rho2", rho2}, {"rho1", rho1}};
        });
        const double lam2 = dt_probability_premium_exact(h2, s.p0, s.eps2);
        const double lam1 = dt_probability_premium_exact(h1, s.p0, s.eps2);
        prob.add(lam2 - lam1, kPremiumDominanceTol, [&] {
            return std::vector<WitnessCoord>{{"p0", s.p0}, {"eps2", s.eps2}, {"lambda2", lam2},
                                             {"lambda1", lam1}};
        });
    }
    return {risk.finish(), prob.finish()};
}

ConditionResult check_concave_composition(const WeightingFn& h2, const WeightingFn& h1, std::size_t n) {
    if (n < 3) throw GridError("concave composition: need at least 3 grid points");
    const std::vector<double> t = interior_grid(0.0, 1.0, n);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = h2.value(h1.inverse(t[i]));
    return concavity_check(t, g);
}

ConditionResult check_cross_ratio(const WeightingFn& h2, const WeightingFn& h1,
                                  std::span<const Quadruple> sample) {
    if (sample.empty()) throw GridError("cross ratio: empty quadruple sample");
    return cross_ratio_check([&](double p) { return h2.value(p); }, [&](double p) { return h1.value(p); },
                             sample);
}

// ---------------------------------------------------------------------------
// utility side
// ---------------------------------------------------------------------------

ConditionResult check_index_dominance(const UtilityFn& u2, const UtilityFn& u1,
                                      std::span<const double> x_grid) {
    if (x_grid.empty()) throw GridError("index dominance: empty payoff grid");
    MarginTracker t("index_dominance");
    for (double x : x_grid) {
        const double a2 = u2.absolute_risk_aversion(x);
        const double a1 = u1.absolute_risk_aversion(x);
        t.add(a2 - a1, kComparisonSlack, [&] {
            return std::vector<WitnessCoord>{{"x", x}, {"ara2", a2}, {"ara1", a1}};
        });
    }
    return t.finish();
}

ConditionResult check_concave_composition(const UtilityFn& u2, const UtilityFn& u1, double x_lo,
                                          double x_hi, std::size_t n) {
    if (n < 3) throw GridError("concave composition: need at least 3 grid points");
    if (!(x_hi > x_lo)) throw GridError("concave composition: empty payoff window");
    const std::vector<double> t = interior_grid(u1.value(x_lo), u1.value(x_hi), n);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = u2.value(u1.inverse(t[i]));
    return concavity_check(t, g);
}

ConditionResult check_cross_ratio(const UtilityFn& u2, const UtilityFn& u1,
                                  std::span<const Quadruple> sample) {
    if (sample.empty()) throw GridError("cross ratio: empty quadruple sample");
    return cross_ratio_check([&](double x) { return u2.value(x); }, [&](double x) { return u1.value(x); },
                             sample);
}

PremiumDominance check_premium_dominance_rdu(const DecisionMaker& dm2, const DecisionMaker& dm1,
                                             std::span<const Scenario> grid) {
    if (grid.empty()) throw GridError("premium dominance: empty scenario grid");
    MarginTracker risk("risk_premium_dominance");
    MarginTracker prob("probability_premium_dominance");
    for (const Scenario& s : grid) {
        const auto where = [&s] {
            return std::vector<WitnessCoord>{{"x0", s.x0}, {"p0", s.p0}, {"eps1", s.eps1}, {"eps2", s.eps2}};
        };
        const double sig2 = rdu_risk_premium_exact(dm2, s);
        const double sig1 = rdu_risk_premium_exact(dm1, s);
        risk.add(sig2 - sig1, kPremiumDominanceTol, [&] {
            auto w = where();
            w.push_back({"sigma2", sig2});
            w.push_back({"sigma1", sig1});
            return w;
        });
        const double mu2 = rdu_probability_premium_exact(dm2, s);
        const double mu1 = rdu_probability_premium_exact(dm1, s);
        prob.add(mu2 - mu1, kPremiumDominanceTol, [&] {
            auto w = where();
            w.push_back({"mu2", mu2});
            w.push_back({"mu1", mu1});
            return w;
        });
    }
    return {risk.finish(), prob.finish()};
}

// ---------------------------------------------------------------------------
// grids
// ---------------------------------------------------------------------------

std::vector<double> domain_safe_x0(const Interval& domain, double max_eps1) {
    if (!domain.bounded_below() && !domain.bounded_above()) return {-1.0, 0.0, 1.0};
    if (domain.bounded_below() && !domain.bounded_above()) {
        const double base = domain.lo + max_eps1;
        return {base + 0.5, base + 1.5, base + 2.5};
    }
    if (!domain.bounded_below()) {
        const double top = domain.hi - max_eps1;
        return {top - 2.5, top - 1.5, top - 0.5};
    }
    const double lo = domain.lo + max_eps1;
    const double hi = domain.hi - max_eps1;
    if (!(hi > lo)) {
        throw GridError("grids: utility domain too narrow for eps1=" + format_sig(max_eps1, 6));
    }
    return {lo + 0.25 * (hi - lo), lo + 0.5 * (hi - lo), lo + 0.75 * (hi - lo)};
}

std::vector<ProbabilityScenario> probability_scenario_grid(const ComparisonGrids& g) {
    std::vector<ProbabilityScenario> out;
    for (double p0 : g.p0_values) {
        const double cap = std::min(p0, 1.0 - p0);
        for (double e2 : g.eps2_values) {
            if (e2 <= cap) out.push_back({p0, e2});
        }
        if (g.include_max_eps2 &&
            std::none_of(g.eps2_values.begin(), g.eps2_values.end(), [&](double e) { return e == cap; })) {
            out.push_back({p0, cap});
        }
    }
    if (out.empty()) throw GridError("grids: no admissible (p0, eps2) pair");
    return out;
}

std::vector<Scenario> scenario_grid(const ComparisonGrids& g, const Interval& domain) {
    check_grids(g);
    const double max_eps1 = *std::max_element(g.eps1_values.begin(), g.eps1_values.end());
    const std::vector<double> x0s = g.x0_values.empty() ? domain_safe_x0(domain, max_eps1) : g.x0_values;
    std::vector<Scenario> out;
    for (double x0 : x0s) {
        for (double e1 : g.eps1_values) {
            if (!domain.contains(x0 - e1) || !domain.contains(x0 + e1)) {
                throw GridError("grids: x0=" + format_sig(x0, 6) + " with eps1=" + format_sig(e1, 6) +
                                " leaves the utility domain");
            }
            for (const auto& ps : probability_scenario_grid(g)) {
                out.push_back({x0, ps.p0, e1, ps.eps2});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// full comparison
// ---------------------------------------------------------------------------

bool ComparisonReport::all_hold() const noexcept {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.holds(); });
}

bool ComparisonReport::all_fail() const noexcept {
    return std::none_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.holds(); });
}

ComparisonReport compare_aversion(const DecisionMaker& dm2, const DecisionMaker& dm1,
                                  const ComparisonGrids& grids) {
    check_grids(grids);
    ComparisonReport rep;
    rep.agent2 = dm2.describe();
    rep.agent1 = dm1.describe();
    rep.dual_only = dm2.utility.is_linear() && dm1.utility.is_linear();
    rep.interior_points = grids.interior_points;

    const std::vector<double> p_grid = interior_grid(0.0, 1.0, grids.interior_points);
    const std::vector<Quadruple> quads_h =
        sample_quadruples(kWeightingEdge, 1.0 - kWeightingEdge, grids.quadruple_samples, grids.seed);

    const ConditionResult index_h = check_index_dominance(dm2.weighting, dm1.weighting, p_grid);
    const ConditionResult concave_h =
        check_concave_composition(dm2.weighting, dm1.weighting, grids.interior_points);
    const ConditionResult cross_h = check_cross_ratio(dm2.weighting, dm1.weighting, quads_h);

    if (rep.dual_only) {
        const auto ps = probability_scenario_grid(grids);
        const PremiumDominance prem = check_premium_dominance_dt(dm2.weighting, dm1.weighting, ps);
        rep.scenarios = ps.size();
        rep.quadruples = quads_h.size();
        rep.conditions = {index_h, prem.risk, prem.probability, concave_h, cross_h};
        return rep;
    }

    const Interval d1 = dm1.utility.domain();
    const Interval d2 = dm2.utility.domain();
    const Interval domain{std::max(d1.lo, d2.lo), std::min(d1.hi, d2.hi)};
    if (!(domain.hi > domain.lo)) throw GridError("grids: utility domains do not overlap");

    const std::vector<Scenario> scenarios = scenario_grid(grids, domain);
    const double max_eps1 = *std::max_element(grids.eps1_values.begin(), grids.eps1_values.end());
    double x0_min = scenarios.front().x0;
    double x0_max = scenarios.front().x0;
    for (const auto& s : scenarios) {
        x0_min = std::min(x0_min, s.x0);
        x0_max = std::max(x0_max, s.x0);
    }
    rep.x_lo = x0_min - max_eps1;
    rep.x_hi = x0_max + max_eps1;

    const std::vector<double> x_grid = interior_grid(rep.x_lo, rep.x_hi, grids.interior_points);
    const std::vector<Quadruple> quads_u =
        sample_quadruples(rep.x_lo, rep.x_hi, grids.quadruple_samples, grids.seed + 1);

    const ConditionResult index_u = check_index_dominance(dm2.utility, dm1.utility, x_grid);
    const ConditionResult concave_u =
        check_concave_composition(dm2.utility, dm1.utility, rep.x_lo, rep.x_hi, grids.interior_points);
    const ConditionResult cross_u = check_cross_ratio(dm2.utility, dm1.utility, quads_u);
    const PremiumDominance prem = check_premium_dominance_rdu(dm2, dm1, scenarios);

    rep.scenarios = scenarios.size();
    rep.quadruples = quads_h.size() + quads_u.size();
    rep.conditions = {combine(index_u, index_h), prem.risk, prem.probability,
                      combine(concave_u, concave_h), combine(cross_u, cross_h)};
    return rep;
}

nlohmann::ordered_json to_json(const ComparisonReport& report) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["agent2"] = report.agent2;
    j["agent1"] = report.agent1;
    j["mode"] = report.dual_only ? "dual" : "rank_dependent";
    j["consistent"] = report.consistent();
    j["all_hold"] = report.all_hold();
    ordered_json conds = ordered_json::array();
    for (const auto& c : report.conditions) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["verdict"] = std::string(to_string(c.verdict));
        cj["worst_margin"] = round_sig(c.worst_margin, kMachineDigits);
        cj["points"] = c.points;
        ordered_json w = ordered_json::object();
        for (const auto& coord : c.witness) w[coord.name] = round_sig(coord.value, kMachineDigits);
        cj["witness"] = w;
        conds.push_back(cj);
    }
    j["conditions"] = conds;
    ordered_json grids;
    grids["interior_points"] = report.interior_points;
    grids["scenarios"] = report.scenarios;
    grids["quadruples"] = report.quadruples;
    if (!report.dual_only) {
        grids["x_window"] = {round_sig(report.x_lo, kMachineDigits), round_sig(report.x_hi, kMachineDigits)};
    }
    j["grids"] = grids;
    j["tolerances"] = {{"slack", report.slack}, {"premium_tol", report.premium_tol}};
    return j;
}

std::string to_table(const ComparisonReport& report) {
    std::ostringstream os;
    os << "agent 2: " << report.agent2 << "\n";
    os << "agent 1: " << report.agent1 << "\n";
    os << "mode:    " << (report.dual_only ? "dual (weighting only)" : "rank-dependent") << "\n\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-30s %-18s %14s %8s\n", "condition", "verdict", "worst margin",
                  "points");
    os << line;
    for (const auto& c : report.conditions) {
        std::snprintf(line, sizeof(line), "%-30s %-18s %14s %8zu\n", c.name.c_str(),
                      std::string(to_string(c.verdict)).c_str(),
                      format_sig(c.worst_margin, kTableDigits).c_str(), c.points);
        os << line;
        if (!c.witness.empty()) {
            os << "    witness:";
            for (const auto& w : c.witness) os << " " << w.name << "=" << format_sig(w.value, kTableDigits);
            os << "\n";
        }
    }
    os << "\n";
    os << "grid: " << report.interior_points << " interior points, " << report.scenarios << " scenarios, "
       << report.quadruples << " quadruples";
    if (!report.dual_only) {
        os << ", payoff window [" << format_sig(report.x_lo, kTableDigits) << ", "
           << format_sig(report.x_hi, kTableDigits) << "]";
    }
    os << "\n";
    os << "verdicts " << (report.consistent() ? "agree" : "DISAGREE") << "\n";
    return os.str();
}

}  // namespace riskprem
