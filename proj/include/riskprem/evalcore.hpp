// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "riskprem/funclib.hpp"

namespace riskprem {

struct State {
    double payoff;
    double probability;
};

/// Finite-support lottery held in canonical form: payoffs strictly
/// ascending, equal payoffs merged, probabilities in (0,1] summing to one
/// within 1e-12. Construction never renormalizes; it throws LotteryError.
class Lottery {
public:
    explicit Lottery(std::vector<State> states);

    /// {(c, 1)}
    [[nodiscard]] static Lottery degenerate(double payoff);

    [[nodiscard]] const std::vector<State>& states() const noexcept { return states_; }
    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }

private:
    std::vector<State> states_;
};

inline constexpr double kProbabilitySumTol = 1e-12;

/// One RDU agent. Identity weighting gives EU, linear utility gives DT.
struct DecisionMaker {
    UtilityFn utility = UtilityFn::linear();
    WeightingFn weighting = WeightingFn::identity();
    std::string label;

    [[nodiscard]] std::string describe() const {
        return utility.to_string() + " / " + weighting.to_string();
    }
};

/// sum_i [h(F_i) - h(F_{i-1})] U(x_i) with F_i the cumulative probability
/// of the i-th smallest payoff.
[[nodiscard]] double evaluate_rdu(const DecisionMaker& dm, const Lottery& lottery);

/// Same functional through decumulative probabilities:
/// sum_i [hbar(G_i) - hbar(G_{i+1})] U(x_i), G_i = P(X >= x_i),
/// hbar(p) = 1 - h(1 - p).
[[nodiscard]] double evaluate_dual_form(const DecisionMaker& dm, const Lottery& lottery);

/// U^{-1}(evaluate_rdu(dm, lottery)); throws RangeError if not attainable.
[[nodiscard]] double certainty_equivalent(const DecisionMaker& dm, const Lottery& lottery);

}  // namespace riskprem
