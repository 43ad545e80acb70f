// SPDX-License-Identifier: MIT
#include "render.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>

#include <json.hpp>

#include "riskprem/errors.hpp"
#include "riskprem/format.hpp"
#include "riskprem/spec_parse.hpp"

namespace riskprem::cli {

namespace {

using nlohmann::ordered_json;

double jnum(double v) { return round_sig(v, kMachineDigits); }
std::string cnum(double v) { return format_sig(v, kMachineDigits); }
std::string tnum(double v) { return format_sig(v, kTableDigits); }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    return line + "\n";
}

// First column left-aligned, the rest right-aligned.
std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    std::string s;
    const auto emit = [&](const std::vector<std::string>& row) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string pad(width[c] - row[c].size(), ' ');
            if (c == 0) {
                line += row[c] + pad;
            } else {
                line += "  " + pad + row[c];
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        s += line + "\n";
    };
    emit(header);
    std::size_t total = 0;
    for (std::size_t w : width) total += w + 2;
    s += std::string(total - 2, '-') + "\n";
    for (const auto& row : rows) emit(row);
    return s;
}

ordered_json agent_json(const DecisionMaker& dm) {
    ordered_json j;
    j["utility"] = to_json(dm.utility);
    j["weighting"] = to_json(dm.weighting);
    return j;
}

ordered_json scenario_json(const Scenario& s) {
    return {{"x0", jnum(s.x0)}, {"p0", jnum(s.p0)}, {"eps1", jnum(s.eps1)}, {"eps2", jnum(s.eps2)}};
}

struct NamedPair {
    const char* name;
    const PremiumPair* pair;
    double residual;
};

std::vector<NamedPair> named_pairs(const PremiumReport& r) {
    return {{"pi", &r.pi, r.residuals.pi},          {"gamma", &r.gamma, r.residuals.gamma},
            {"rho", &r.rho, r.residuals.rho},       {"lambda", &r.lambda, r.residuals.lambda},
            {"sigma", &r.sigma, r.residuals.sigma}, {"mu", &r.mu, r.residuals.mu}};
}

const std::vector<std::string>& premium_columns() {
    static const std::vector<std::string> cols{
        "x0",    "p0",           "eps1",   "eps2",          "pi",         "pi_approx",     "gamma",
        "gamma_approx", "rho",   "rho_approx",    "lambda",     "lambda_approx", "sigma",
        "sigma_approx", "mu",    "mu_approx",     "ara",        "dual_index",    "max_residual",
        "max_link_delta"};
    return cols;
}

std::vector<double> premium_values(const PremiumReport& r) {
    const Scenario& s = r.scenario;
    return {s.x0,          s.p0,           s.eps1,          s.eps2,          r.pi.exact,
            r.pi.approx,   r.gamma.exact,  r.gamma.approx,  r.rho.exact,     r.rho.approx,
            r.lambda.exact, r.lambda.approx, r.sigma.exact, r.sigma.approx,  r.mu.exact,
            r.mu.approx,   r.ara,          r.dual_index,    r.residuals.max_abs(), r.links.max_abs()};
}

ordered_json premium_row_json(const PremiumReport& r) {
    ordered_json j;
    const auto& cols = premium_columns();
    const auto vals = premium_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) j[cols[i]] = jnum(vals[i]);
    return j;
}

std::string premium_row_csv(const PremiumReport& r) {
    std::vector<std::string> cells;
    for (double v : premium_values(r)) cells.push_back(cnum(v));
    return csv_line(cells);
}

}  // namespace

Format parse_format(const std::string& name) {
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    if (name == "table") return Format::table;
    throw ParseError("--format: expected json, csv or table, got '" + name + "'");
}

// ---------------------------------------------------------------------------

std::string render_eval(const EvalResult& r, Format f) {
    switch (f) {
        case Format::json: {
            ordered_json j;
            j["agent"] = agent_json(r.agent);
            ordered_json states = ordered_json::array();
            for (const auto& st : r.lottery.states()) {
                states.push_back({{"x", jnum(st.payoff)}, {"p", jnum(st.probability)}});
            }
            j["lottery"] = states;
            j["value"] = jnum(r.value);
            j["dual_form_value"] = jnum(r.dual_form_value);
            j["certainty_equivalent"] = jnum(r.certainty_equivalent);
            return dump(j);
        }
        case Format::csv:
            return csv_line({"value", "dual_form_value", "certainty_equivalent"}) +
                   csv_line({cnum(r.value), cnum(r.dual_form_value), cnum(r.certainty_equivalent)});
        case Format::table: {
            std::ostringstream os;
            os << "agent: " << r.agent.describe() << "\n";
            os << "states: " << r.lottery.size() << "\n\n";
            os << table({"quantity", "value"}, {{"value", tnum(r.value)},
                                                {"dual_form_value", tnum(r.dual_form_value)},
                                                {"certainty_equivalent", tnum(r.certainty_equivalent)}});
            return os.str();
        }
    }
    return {};
}

std::string render_premia(const DecisionMaker& dm, const PremiumReport& r, Format f) {
    switch (f) {
        case Format::json: {
            ordered_json j;
            j["agent"] = agent_json(dm);
            j["scenario"] = scenario_json(r.scenario);
            ordered_json premia;
            for (const auto& p : named_pairs(r)) {
                premia[p.name] = {{"exact", jnum(p.pair->exact)},
                                  {"approx", jnum(p.pair->approx)},
                                  {"exact_minus_approx", jnum(p.pair->delta())}};
            }
            j["premia"] = premia;
            j["indexes"] = {{"ara", jnum(r.ara)}, {"dual_index", jnum(r.dual_index)}};
            ordered_json res;
            for (const auto& p : named_pairs(r)) res[p.name] = jnum(p.residual);
            j["residuals"] = res;
            j["links"] = {{"pi_gamma", jnum(r.links.pi_gamma)},
                          {"lambda_rho", jnum(r.links.lambda_rho)},
                          {"sigma_sum", jnum(r.links.sigma_sum)},
                          {"mu_sum", jnum(r.links.mu_sum)},
                          {"sigma_mu", jnum(r.links.sigma_mu)}};
            return dump(j);
        }
        case Format::csv:
            return csv_line(premium_columns()) + premium_row_csv(r);
        case Format::table: {
            std::ostringstream os;
            const Scenario& s = r.scenario;
            os << "agent:    " << dm.describe() << "\n";
            os << "scenario: x0=" << tnum(s.x0) << " p0=" << tnum(s.p0) << " eps1=" << tnum(s.eps1)
               << " eps2=" << tnum(s.eps2) << "\n\n";
            std::vector<std::vector<std::string>> rows;
            for (const auto& p : named_pairs(r)) {
                rows.push_back({p.name, tnum(p.pair->exact), tnum(p.pair->approx), tnum(p.pair->delta()),
                                tnum(p.residual)});
            }
            os << table({"premium", "exact", "approx", "exact-approx", "residual"}, rows);
            os << "\nlocal indexes: ara=" << tnum(r.ara) << " dual_index=" << tnum(r.dual_index) << "\n";
            os << "link deltas:   pi_gamma=" << tnum(r.links.pi_gamma)
               << " lambda_rho=" << tnum(r.links.lambda_rho) << " sigma_sum=" << tnum(r.links.sigma_sum)
               << " mu_sum=" << tnum(r.links.mu_sum) << " sigma_mu=" << tnum(r.links.sigma_mu) << "\n";
            return os.str();
        }
    }
    return {};
}

std::string render_sweep(const DecisionMaker& dm, const std::string& axis,
                         const std::vector<PremiumReport>& rows, Format f) {
    switch (f) {
        case Format::json: {
            ordered_json j;
            j["agent"] = agent_json(dm);
            j["axis"] = axis;
            ordered_json arr = ordered_json::array();
            for (const auto& r : rows) arr.push_back(premium_row_json(r));
            j["rows"] = arr;
            return dump(j);
        }
        case Format::csv: {
            std::string s = csv_line(premium_columns());
            for (const auto& r : rows) s += premium_row_csv(r);
            return s;
        }
        case Format::table: {
            std::vector<std::vector<std::string>> cells;
            for (const auto& r : rows) {
                const Scenario& sc = r.scenario;
                const double a = axis == "x0" ? sc.x0 : axis == "p0" ? sc.p0 : axis == "eps1" ? sc.eps1 : sc.eps2;
                cells.push_back({tnum(a), tnum(r.pi.exact), tnum(r.gamma.exact), tnum(r.rho.exact),
                                 tnum(r.lambda.exact), tnum(r.sigma.exact), tnum(r.mu.exact)});
            }
            return "agent: " + dm.describe() + "\n\n" +
                   table({axis, "pi", "gamma", "rho", "lambda", "sigma", "mu"}, cells);
        }
    }
    return {};
}

std::string render_convergence(const ConvergenceStudy& s, Format f) {
    const std::string norm = "error/" + s.varied + "^" + std::to_string(s.power);
    const std::string order = s.order ? cnum(*s.order) : "exact";
    switch (f) {
        case Format::json: {
            ordered_json j;
            j["premium"] = s.premium;
            j["agent"] = s.agent;
            j["varied"] = s.varied;
            j["normalization_power"] = s.power;
            ordered_json arr = ordered_json::array();
            for (const auto& r : s.rows) {
                arr.push_back({{"level", r.level},
                               {"eps", jnum(r.eps)},
                               {"exact", jnum(r.exact)},
                               {"approx", jnum(r.approx)},
                               {"abs_error", jnum(r.abs_error)},
                               {"normalized_error", jnum(r.normalized_error)}});
            }
            j["levels"] = arr;
            if (s.order) {
                j["order"] = jnum(*s.order);
            } else {
                j["order"] = "exact";
            }
            return dump(j);
        }
        case Format::csv: {
            std::string out = csv_line({"level", "eps", "exact", "approx", "abs_error", "normalized_error",
                                        "fitted_order"});
            for (const auto& r : s.rows) {
                out += csv_line({std::to_string(r.level), cnum(r.eps), cnum(r.exact), cnum(r.approx),
                                 cnum(r.abs_error), cnum(r.normalized_error), order});
            }
            return out;
        }
        case Format::table: {
            std::vector<std::vector<std::string>> cells;
            for (const auto& r : s.rows) {
                cells.push_back({std::to_string(r.level), tnum(r.eps), tnum(r.exact), tnum(r.approx),
                                 tnum(r.abs_error), tnum(r.normalized_error)});
            }
            std::ostringstream os;
            os << "premium: " << s.premium << " (halving " << s.varied << ")\n";
            os << "agent:   " << s.agent << "\n\n";
            os << table({"level", s.varied, "exact", "approx", "|error|", norm}, cells);
            os << "\nfitted order: " << (s.order ? tnum(*s.order) : std::string("exact")) << "\n";
            return os.str();
        }
    }
    return {};
}

std::string render_compare(const ComparisonReport& r, Format f) {
    switch (f) {
        case Format::json:
            return dump(to_json(r));
        case Format::csv: {
            std::string out = csv_line({"condition", "verdict", "worst_margin", "points", "witness"});
            for (const auto& c : r.conditions) {
                std::string w;
                for (const auto& coord : c.witness) {
                    if (!w.empty()) w += ';';
                    w += coord.name + "=" + cnum(coord.value);
                }
                out += csv_line({c.name, std::string(to_string(c.verdict)), cnum(c.worst_margin),
                                 std::to_string(c.points), w});
            }
            return out;
        }
        case Format::table:
            return to_table(r);
    }
    return {};
}

}  // namespace riskprem::cli
