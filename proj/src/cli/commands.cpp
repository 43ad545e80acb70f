// SPDX-License-Identifier: MIT
#include "riskprem/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "render.hpp"
#include "riskprem/comparative.hpp"
#include "riskprem/errors.hpp"
#include "riskprem/evalcore.hpp"
#include "riskprem/lottery_io.hpp"
#include "riskprem/numerics.hpp"
#include "riskprem/premia.hpp"
#include "riskprem/spec_parse.hpp"

namespace riskprem {

namespace {

using cli::Format;
using nlohmann::json;

constexpr const char* kPremiaHelp =
    "Exact and approximate risk and probability premia for one agent.\n"
    "The scenario is initial wealth x0, a middle state of probability mass\n"
    "2*eps2 centred at p0, and an added +-eps1 payoff risk. The lowest and\n"
    "highest outer states of the construction cancel from every premium\n"
    "equation, so only (x0, p0, eps1, eps2) matter.";

struct RunConfig {
    std::string utility = "linear";
    std::string weighting = "identity";
    std::string utility2;
    std::string weighting2;
    Scenario scenario;
    std::string format;
    std::string out;
    std::string config;
    // eval
    std::string lottery;
    // sweep
    std::string axis = "eps1";
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    // convergence
    std::string premium = "pi";
    int levels = 5;
    // compare
    std::size_t points = ComparisonGrids{}.interior_points;
    std::size_t samples = ComparisonGrids{}.quadruple_samples;
    std::uint64_t seed = ComparisonGrids{}.seed;
};

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(std::string(what) + ": cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A spec argument is inline text (compact or JSON) or the path of a JSON file.
std::string spec_text(const std::string& arg) {
    if (!arg.empty() && arg.front() != '{' && arg.find(':') == std::string::npos &&
        std::filesystem::is_regular_file(arg)) {
        return read_file(arg, "function spec");
    }
    return arg;
}

DecisionMaker make_agent(const std::string& utility, const std::string& weighting) {
    DecisionMaker dm;
    dm.utility = utility_from_spec(spec_text(utility));
    dm.weighting = weighting_from_spec(spec_text(weighting));
    return dm;
}

// --- config file -----------------------------------------------------------

// Values from --config replace command-line flags; an explicit flag that is
// overridden produces a warning.
void apply_config(RunConfig& cfg, const CLI::App& sub, std::ostream& err) {
    const json j = [&] {
        try {
            return json::parse(read_file(cfg.config, "--config"));
        } catch (const json::parse_error& e) {
            throw ParseError("--config '" + cfg.config + "': " + e.what());
        }
    }();
    if (!j.is_object()) throw ParseError("--config: top level must be a JSON object");

    const auto as_spec = [](const json& v, const std::string& key) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_object()) return v.dump();
        throw ParseError("--config: '" + key + "' must be a string or object");
    };
    const auto as_number = [](const json& v, const std::string& key) {
        if (!v.is_number()) throw ParseError("--config: '" + key + "' must be a number");
        return v.get<double>();
    };
    const auto as_string = [](const json& v, const std::string& key) {
        if (!v.is_string()) throw ParseError("--config: '" + key + "' must be a string");
        return v.get<std::string>();
    };
    const auto as_count = [&](const json& v, const std::string& key) {
        const double d = as_number(v, key);
        if (d != std::floor(d) || d < 0 || d > 1e9) {
            throw ParseError("--config: '" + key + "' must be a non-negative integer");
        }
        return static_cast<long long>(d);
    };

    using Setter = std::function<void(const json&, const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"utility", [&](const json& v, const std::string& k) { cfg.utility = as_spec(v, k); }},
        {"weighting", [&](const json& v, const std::string& k) { cfg.weighting = as_spec(v, k); }},
        {"utility2", [&](const json& v, const std::string& k) { cfg.utility2 = as_spec(v, k); }},
        {"weighting2", [&](const json& v, const std::string& k) { cfg.weighting2 = as_spec(v, k); }},
        {"x0", [&](const json& v, const std::string& k) { cfg.scenario.x0 = as_number(v, k); }},
        {"p0", [&](const json& v, const std::string& k) { cfg.scenario.p0 = as_number(v, k); }},
        {"eps1", [&](const json& v, const std::string& k) { cfg.scenario.eps1 = as_number(v, k); }},
        {"eps2", [&](const json& v, const std::string& k) { cfg.scenario.eps2 = as_number(v, k); }},
        {"format", [&](const json& v, const std::string& k) { cfg.format = as_string(v, k); }},
        {"out", [&](const json& v, const std::string& k) { cfg.out = as_string(v, k); }},
        {"lottery", [&](const json& v, const std::string& k) { cfg.lottery = as_string(v, k); }},
        {"axis", [&](const json& v, const std::string& k) { cfg.axis = as_string(v, k); }},
        {"from", [&](const json& v, const std::string& k) { cfg.from = as_number(v, k); }},
        {"to", [&](const json& v, const std::string& k) { cfg.to = as_number(v, k); }},
        {"steps", [&](const json& v, const std::string& k) { cfg.steps = static_cast<int>(as_count(v, k)); }},
        {"premium", [&](const json& v, const std::string& k) { cfg.premium = as_string(v, k); }},
        {"levels", [&](const json& v, const std::string& k) { cfg.levels = static_cast<int>(as_count(v, k)); }},
        {"points", [&](const json& v, const std::string& k) { cfg.points = as_count(v, k); }},
        {"samples", [&](const json& v, const std::string& k) { cfg.samples = as_count(v, k); }},
        {"seed", [&](const json& v, const std::string& k) { cfg.seed = static_cast<std::uint64_t>(as_count(v, k)); }},
    };

    for (const auto& [key, value] : j.items()) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ParseError("--config: unknown key '" + key + "'");
        const CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
        }
        if (opt != nullptr && opt->count() > 0) {
            err << "warning: --config value for '" << key << "' overrides --" << key << "\n";
        }
        it->second(value, key);
    }
}

// --- commands --------------------------------------------------------------

std::string cmd_eval(const RunConfig& cfg, Format f) {
    if (cfg.lottery.empty()) throw ParseError("eval: --lottery is required");
    const DecisionMaker dm = make_agent(cfg.utility, cfg.weighting);
    Lottery lot = load_lottery(cfg.lottery);
    const double value = evaluate_rdu(dm, lot);
    const double dual = evaluate_dual_form(dm, lot);
    const double ce = certainty_equivalent(dm, lot);
    return cli::render_eval({dm, std::move(lot), value, dual, ce}, f);
}

std::string cmd_premia(const RunConfig& cfg, Format f) {
    const DecisionMaker dm = make_agent(cfg.utility, cfg.weighting);
    validate_scenario(dm, cfg.scenario);
    return cli::render_premia(dm, premium_report(dm, cfg.scenario), f);
}

std::string cmd_sweep(const RunConfig& cfg, Format f) {
    const DecisionMaker dm = make_agent(cfg.utility, cfg.weighting);
    if (cfg.steps < 1) throw GridError("sweep: --steps must be at least 1 (empty range)");
    double Scenario::*field = nullptr;
    if (cfg.axis == "x0") {
        field = &Scenario::x0;
    } else if (cfg.axis == "p0") {
        field = &Scenario::p0;
    } else if (cfg.axis == "eps1") {
        field = &Scenario::eps1;
    } else if (cfg.axis == "eps2") {
        field = &Scenario::eps2;
    } else {
        throw ParseError("sweep: --axis must be x0, p0, eps1 or eps2, got '" + cfg.axis + "'");
    }
    if (!std::isfinite(cfg.from) || !std::isfinite(cfg.to)) throw GridError("sweep: range ends must be finite");

    std::vector<Scenario> grid(static_cast<std::size_t>(cfg.steps), cfg.scenario);
    for (int i = 0; i < cfg.steps; ++i) {
        const double t = cfg.steps == 1 ? 0.0 : static_cast<double>(i) / (cfg.steps - 1);
        grid[static_cast<std::size_t>(i)].*field = i == cfg.steps - 1 && cfg.steps > 1 ? cfg.to
                                                                                    : cfg.from + t * (cfg.to - cfg.from);
    }
    for (const Scenario& s : grid) validate_scenario(dm, s);

    std::vector<PremiumReport> rows;
    rows.reserve(grid.size());
    for (const Scenario& s : grid) rows.push_back(premium_report(dm, s));
    return cli::render_sweep(dm, cfg.axis, rows, f);
}

std::string cmd_convergence(const RunConfig& cfg, Format f) {
    const DecisionMaker dm = make_agent(cfg.utility, cfg.weighting);
    if (cfg.levels < 2) throw GridError("convergence: --levels must be at least 2");
    const Scenario& base = cfg.scenario;

    cli::ConvergenceStudy study;
    study.premium = cfg.premium;
    std::function<std::pair<double, double>(double)> at;  // scale factor -> (exact, approx)
    double eps0 = 0.0;

    if (cfg.premium == "pi" || cfg.premium == "gamma") {
        validate_payoff_scenario(dm.utility, base.x0, base.eps1);
        study.agent = dm.utility.to_string();
        study.varied = "eps1";
        eps0 = base.eps1;
        const bool pi = cfg.premium == "pi";
        study.power = pi ? 2 : 1;
        at = [&dm, &base, pi](double e) {
            return pi ? std::pair{eu_risk_premium_exact(dm.utility, base.x0, e),
                                  eu_risk_premium_approx(dm.utility, base.x0, e)}
                      : std::pair{eu_probability_premium_exact(dm.utility, base.x0, e),
                                  eu_probability_premium_approx(dm.utility, base.x0, e)};
        };
    } else if (cfg.premium == "rho" || cfg.premium == "lambda") {
        validate_probability_scenario(base.p0, base.eps2);
        study.agent = dm.weighting.to_string();
        study.varied = "eps2";
        eps0 = base.eps2;
        const bool rho = cfg.premium == "rho";
        study.power = rho ? 1 : 2;
        at = [&dm, &base, rho](double e) {
            return rho ? std::pair{dt_risk_premium_exact(dm.weighting, base.p0, e),
                                   dt_risk_premium_approx(dm.weighting, base.p0, e)}
                       : std::pair{dt_probability_premium_exact(dm.weighting, base.p0, e),
                                   dt_probability_premium_approx(dm.weighting, base.p0, e)};
        };
    } else if (cfg.premium == "sigma" || cfg.premium == "mu") {
        // Both epsilons shrink together at a fixed ratio; the approximations
        // are second order in the common scale.
        validate_scenario(dm, base);
        study.agent = dm.describe();
        study.varied = "eps1";
        eps0 = base.eps1;
        study.power = 2;
        const bool sigma = cfg.premium == "sigma";
        at = [&dm, &base, sigma](double e) {
            Scenario s = base;
            s.eps2 = base.eps2 * (e / base.eps1);
            s.eps1 = e;
            return sigma ? std::pair{rdu_risk_premium_exact(dm, s), rdu_risk_premium_approx(dm, s)}
                         : std::pair{rdu_probability_premium_exact(dm, s), rdu_probability_premium_approx(dm, s)};
        };
    } else {
        throw ParseError("convergence: --premium must be pi, gamma, rho, lambda, sigma or mu, got '" +
                         cfg.premium + "'");
    }

    std::vector<ScaledError> errors;
    double eps = eps0;
    for (int level = 0; level < cfg.levels; ++level, eps *= 0.5) {
        const auto [exact, approx] = at(eps);
        const double err = std::abs(exact - approx);
        study.rows.push_back({level, eps, exact, approx, err, err / std::pow(eps, study.power)});
        errors.push_back({eps, err});
    }
    study.order = convergence_order(errors);
    return cli::render_convergence(study, f);
}

std::string cmd_compare(const RunConfig& cfg, Format f) {
    const DecisionMaker dm1 = make_agent(cfg.utility, cfg.weighting);
    const DecisionMaker dm2 = make_agent(cfg.utility2.empty() ? cfg.utility : cfg.utility2,
                                         cfg.weighting2.empty() ? cfg.weighting : cfg.weighting2);
    ComparisonGrids grids;
    grids.interior_points = cfg.points;
    grids.quadruple_samples = cfg.samples;
    grids.seed = cfg.seed;
    return cli::render_compare(compare_aversion(dm2, dm1, grids), f);
}

// --- error reporting -------------------------------------------------------

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

int report(std::ostream& err, int code, const char* kind, const std::exception& e) {
    std::string msg = one_line(e.what());
    const std::string prefix = std::string(kind) + ": ";
    if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
    err << "error[" << (code == kExitInput ? "input" : "compute") << "] " << kind << ": " << msg << "\n";
    return code;
}

void add_shared(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--utility", cfg.utility, "utility spec, e.g. cara:1, crra:2, linear, or JSON")
        ->capture_default_str();
    sub->add_option("--weighting", cfg.weighting, "weighting spec, e.g. power:2, prelec:0.65,1, identity")
        ->capture_default_str();
    sub->add_option("--x0", cfg.scenario.x0, "initial wealth")->capture_default_str();
    sub->add_option("--p0", cfg.scenario.p0, "centre of the probability band")->capture_default_str();
    sub->add_option("--eps1", cfg.scenario.eps1, "payoff risk size")->capture_default_str();
    sub->add_option("--eps2", cfg.scenario.eps2, "probability half-width")->capture_default_str();
    sub->add_option("--format", cfg.format, "json, csv or table");
    sub->add_option("--out", cfg.out, "write output to this file instead of stdout");
    sub->add_option("--config", cfg.config, "JSON file of option values; overrides flags");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Risk and probability premia under expected utility, dual theory and rank-dependent utility",
                 "riskprem"};
    app.require_subcommand(1);

    CLI::App* eval = app.add_subcommand("eval", "Evaluate a lottery: RDU value, dual-form value, certainty equivalent");
    add_shared(eval, cfg);
    eval->add_option("--lottery", cfg.lottery, "JSON ([{\"x\":..,\"p\":..}]) or CSV (header x,p) file");

    CLI::App* premia = app.add_subcommand("premia", kPremiaHelp);
    add_shared(premia, cfg);

    CLI::App* sweep = app.add_subcommand("sweep", "Premia over a grid of one scenario parameter");
    add_shared(sweep, cfg);
    sweep->add_option("--axis", cfg.axis, "x0, p0, eps1 or eps2")->capture_default_str();
    sweep->add_option("--from", cfg.from, "first grid value");
    sweep->add_option("--to", cfg.to, "last grid value");
    sweep->add_option("--steps", cfg.steps, "number of grid points (>= 1)");

    CLI::App* conv = app.add_subcommand("convergence", "Error of a premium approximation as epsilon is halved");
    add_shared(conv, cfg);
    conv->add_option("--premium", cfg.premium, "pi, gamma, rho, lambda, sigma or mu")->capture_default_str();
    conv->add_option("--levels", cfg.levels, "number of epsilon levels")->capture_default_str();

    CLI::App* cmp = app.add_subcommand("compare",
                                       "Check that agent 2 (--utility2/--weighting2) is more risk averse than "
                                       "agent 1 (--utility/--weighting)");
    add_shared(cmp, cfg);
    cmp->add_option("--utility2", cfg.utility2, "utility of agent 2 (default: same as agent 1)");
    cmp->add_option("--weighting2", cfg.weighting2, "weighting of agent 2 (default: same as agent 1)");
    cmp->add_option("--points", cfg.points, "interior grid points")->capture_default_str();
    cmp->add_option("--samples", cfg.samples, "random quadruples for the cross-ratio check")->capture_default_str();
    cmp->add_option("--seed", cfg.seed, "seed of the quadruple sample")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return report(err, kExitInput, "usage", e);
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!cfg.config.empty()) apply_config(cfg, *sub, err);
        const std::string name = sub->get_name();
        const Format f = cli::parse_format(cfg.format.empty() ? (name == "sweep" ? "csv" : "table") : cfg.format);

        std::string text;
        if (name == "eval") {
            text = cmd_eval(cfg, f);
        } else if (name == "premia") {
            text = cmd_premia(cfg, f);
        } else if (name == "sweep") {
            text = cmd_sweep(cfg, f);
        } else if (name == "convergence") {
            text = cmd_convergence(cfg, f);
        } else {
            text = cmd_compare(cfg, f);
        }

        if (cfg.out.empty()) {
            out << text;
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!file) throw ParseError("--out: cannot write '" + cfg.out + "'");
            file << text;
        }
        return kExitOk;
    } catch (const ParseError& e) {
        return report(err, kExitInput, "parse", e);
    } catch (const ScenarioError& e) {
        return report(err, kExitInput, "scenario", e);
    } catch (const DomainError& e) {
        return report(err, kExitInput, "domain", e);
    } catch (const LotteryError& e) {
        return report(err, kExitInput, "lottery", e);
    } catch (const MonotonicityError& e) {
        return report(err, kExitInput, "monotonicity", e);
    } catch (const ParameterError& e) {
        return report(err, kExitInput, "parameter", e);
    } catch (const GridError& e) {
        return report(err, kExitInput, "grid", e);
    } catch (const RangeError& e) {
        return report(err, kExitCompute, "range", e);
    } catch (const DegenerateError& e) {
        return report(err, kExitCompute, "degenerate", e);
    } catch (const InfeasibleError& e) {
        return report(err, kExitCompute, "infeasible", e);
    } catch (const BracketError& e) {
        return report(err, kExitCompute, "bracket", e);
    } catch (const MaxIterError& e) {
        return report(err, kExitCompute, "max_iter", e);
    } catch (const std::exception& e) {
        return report(err, kExitCompute, "internal", e);
    }
}

}  // namespace riskprem
