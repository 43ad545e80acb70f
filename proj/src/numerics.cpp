// SPDX-License-Identifier: MIT
#include "riskprem/numerics.hpp"

#include <cmath>
#include <string>

#include "riskprem/errors.hpp"

namespace riskprem {

double find_root(const RootSpec& spec) {
    if (!spec.objective) {
        throw BracketError("find_root: empty objective");
    }
    double lo = spec.lo;
    double hi = spec.hi;
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw BracketError("find_root: invalid bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
    double f_lo = spec.objective(lo);
    double f_hi = spec.objective(hi);
    if (std::abs(f_lo) < spec.tol) return lo;
    if (std::abs(f_hi) < spec.tol) return hi;
    if (!(std::signbit(f_lo) != std::signbit(f_hi))) {
        throw BracketError("find_root: objective does not change sign on [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    // Secant steps are accepted only while they shrink the bracket by at
    // least half; otherwise the next step is a plain bisection.
    bool force_bisect = false;
    for (int iter = 0; iter < spec.max_iter; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
        }
        double x = mid;
        if (!force_bisect) {
            const double secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if (secant > lo && secant < hi) x = secant;
        }
        const double width = hi - lo;
        const double fx = spec.objective(x);
        if (std::abs(fx) < spec.tol) return x;
        if (std::signbit(fx) == std::signbit(f_lo)) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        force_bisect = (hi - lo) > 0.5 * width;
    }
    throw MaxIterError("find_root: no convergence after " + std::to_string(spec.max_iter) +
                       " iterations");
}

double central_diff_1(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

double central_diff_2(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
}

std::optional<double> convergence_order(std::span<const ScaledError> errors) {
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& e : errors) {
        if (!(std::abs(e.error) >= 1e-14) || !(e.scale > 0.0)) continue;
        const double lx = std::log(e.scale);
        const double ly = std::log(std::abs(e.error));
        n += 1.0;
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    if (n < 2.0) return std::nullopt;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

}  // namespace riskprem
