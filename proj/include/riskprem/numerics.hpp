// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>

namespace riskprem {

inline constexpr double kDefaultDiffStep = 1e-5;

/// A scalar root-finding problem on a closed bracket.
///
/// The objective must be continuous on [lo, hi] and change sign there (or
/// vanish to within `tol` at one end).
struct RootSpec {
    std::function<double(double)> objective;
    double lo = 0.0;
    double hi = 1.0;
    double tol = 1e-12;     ///< residual tolerance |objective(x)| < tol
    int max_iter = 200;
};

/// Safeguarded secant/bisection root finder.
///
/// Every iterate stays inside the initial bracket. Returns as soon as the
/// residual drops below `tol`; if the bracket shrinks to two adjacent doubles
/// first, the endpoint with the smaller residual is returned (it is the root
/// to machine resolution). Throws BracketError when the ends do not straddle
/// a root and MaxIterError when `max_iter` is exhausted.
[[nodiscard]] double find_root(const RootSpec& spec);

/// (f(x+s) - f(x-s)) / 2s
[[nodiscard]] double central_diff_1(const std::function<double(double)>& f, double x,
                                    double step = kDefaultDiffStep);

/// (f(x+s) - 2 f(x) + f(x-s)) / s^2
[[nodiscard]] double central_diff_2(const std::function<double(double)>& f, double x,
                                    double step = kDefaultDiffStep);

struct ScaledError {
    double scale;
    double error;
};

/// Least-squares slope of log(error) against log(scale).
///
/// Points with error below 1e-14 are dropped. Returns nullopt when fewer than
/// two points survive, i.e. the approximation is exact at every scale.
[[nodiscard]] std::optional<double> convergence_order(std::span<const ScaledError> errors);

}  // namespace riskprem
