// SPDX-License-Identifier: MIT
#include "riskprem/evalcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riskprem/errors.hpp"

namespace riskprem {

Lottery::Lottery(std::vector<State> states) {
    if (states.empty()) throw LotteryError("lottery has no states");
    double total = 0.0;
    for (const auto& s : states) {
        if (!std::isfinite(s.payoff)) throw LotteryError("lottery payoff is not finite");
        if (!(s.probability > 0.0 && s.probability <= 1.0)) {
            throw LotteryError("lottery probability " + std::to_string(s.probability) +
                               " outside (0, 1]");
        }
        total += s.probability;
    }
    if (std::abs(total - 1.0) > kProbabilitySumTol) {
        throw LotteryError("lottery probabilities sum to " + std::to_string(total) +
                           ", not 1 (within 1e-12)");
    }
    std::stable_sort(states.begin(), states.end(),
                     [](const State& a, const State& b) { return a.payoff < b.payoff; });
    for (const auto& s : states) {
        if (!states_.empty() && states_.back().payoff == s.payoff) {
            states_.back().probability += s.probability;
        } else {
            states_.push_back(s);
        }
    }
}

Lottery Lottery::degenerate(double payoff) { return Lottery({{payoff, 1.0}}); }

double evaluate_rdu(const DecisionMaker& dm, const Lottery& lottery) {
    const auto& st = lottery.states();
    double value = 0.0;
    double cum = 0.0;
    double h_prev = 0.0;
    for (std::size_t i = 0; i < st.size(); ++i) {
        cum += st[i].probability;
        const double h_cur = (i + 1 == st.size()) ? 1.0 : dm.weighting.value(std::min(cum, 1.0));
        value += (h_cur - h_prev) * dm.utility.value(st[i].payoff);
        h_prev = h_cur;
    }
    return value;
}

double evaluate_dual_form(const DecisionMaker& dm, const Lottery& lottery) {
    const auto& st = lottery.states();
    const std::size_t n = st.size();
    // decum[i] = P(X >= x_i), decum[n] = 0
    std::vector<double> decum(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        decum[i] = decum[i + 1] + st[i].probability;
    }
    decum[0] = 1.0;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double upper = dm.weighting.dual(std::min(decum[i], 1.0));
        const double lower = dm.weighting.dual(std::min(decum[i + 1], 1.0));
        value += (upper - lower) * dm.utility.value(st[i].payoff);
    }
    return value;
}

double certainty_equivalent(const DecisionMaker& dm, const Lottery& lottery) {
    return dm.utility.inverse(evaluate_rdu(dm, lottery));
}

}  // namespace riskprem
