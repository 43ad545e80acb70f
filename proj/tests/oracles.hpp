// SPDX-License-Identifier: MIT
#pragma once

// Reference computations for the tests. Nothing here calls the library's
// root finder, inverses or analytic derivatives.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>

#include "riskprem/evalcore.hpp"
#include "riskprem/funclib.hpp"
#include "riskprem/premia.hpp"

namespace oracle {

/// Plain bisection to bracket width 1e-15 (relative), assuming a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    if ((flo > 0) == (f(hi) > 0)) throw std::logic_error("oracle bisection: no sign change");
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double fd1(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

inline double fd2(const std::function<double(double)>& f, double x, double h = 1e-4) {
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

inline double rel_err(double got, double want, double floor = 1e-12) {
    return std::abs(got - want) / std::max(std::abs(want), floor);
}

// Premia by bisection on the indifference equations, using only value().

inline double risk_premium_eu(const riskprem::UtilityFn& u, double x0, double e1) {
    const double target = 0.5 * u.value(x0 - e1) + 0.5 * u.value(x0 + e1);
    return bisect([&](double pi) { return u.value(x0 - pi) - target; }, -e1, e1);
}

inline double probability_premium_dt(const riskprem::WeightingFn& h, double p0, double e2) {
    const double target = 0.5 * (h.value(p0 - e2) + h.value(p0 + e2));
    return bisect([&](double l) { return h.value(p0 - l) - target; }, -e2, e2);
}

inline double risk_premium_rdu(const riskprem::DecisionMaker& dm, const riskprem::Scenario& s) {
    const auto& u = dm.utility;
    const auto& h = dm.weighting;
    const double hl = h.value(s.p0 - s.eps2), hm = h.value(s.p0), hh = h.value(s.p0 + s.eps2);
    const double rhs = (hm - hl) * u.value(s.x0 - s.eps1) + (hh - hm) * u.value(s.x0 + s.eps1);
    return bisect([&](double sg) { return (hh - hl) * u.value(s.x0 - sg) - rhs; }, -s.eps1, s.eps1);
}

inline double probability_premium_rdu(const riskprem::DecisionMaker& dm, const riskprem::Scenario& s) {
    const auto& u = dm.utility;
    const auto& h = dm.weighting;
    const double hl = h.value(s.p0 - s.eps2), hh = h.value(s.p0 + s.eps2);
    const double ud = u.value(s.x0 - s.eps1), um = u.value(s.x0), uu = u.value(s.x0 + s.eps1);
    return bisect(
        [&](double m) {
            const double hs = h.value(s.p0 - m);
            return (hh - hl) * um - ((hs - hl) * ud + (hh - hs) * uu);
        },
        -s.eps2, s.eps2);
}

}  // namespace oracle

namespace gen {

inline double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform(rng); }

inline riskprem::UtilityFn utility(std::mt19937_64& rng) {
    using riskprem::UtilityFn;
    switch (rng() % 5) {
        case 0:
            return UtilityFn::linear();
        case 1: {
            double a = uniform(rng, -1.0, 3.0);
            if (std::abs(a) < 0.05) a = 0.5;
            return UtilityFn::cara(a);
        }
        case 2:
            return UtilityFn::crra(uniform(rng, 0.3, 4.0));
        case 3:
            return UtilityFn::log();
        default:
            return UtilityFn::quadratic(uniform(rng, 0.05, 0.5));
    }
}

inline riskprem::ConcaveTransform transform(std::mt19937_64& rng) {
    using riskprem::ConcaveTransform;
    switch (rng() % 3) {
        case 0:
            return ConcaveTransform::power(uniform(rng, 0.2, 0.8));
        case 1:
            return ConcaveTransform::exponential(uniform(rng, 0.5, 4.0));
        default:
            return ConcaveTransform::affine_blend(uniform(rng, 0.3, 1.0), uniform(rng, 0.2, 0.8));
    }
}

inline riskprem::WeightingFn base_weighting(std::mt19937_64& rng) {
    using riskprem::WeightingFn;
    switch (rng() % 4) {
        case 0:
            return WeightingFn::identity();
        case 1:
            return WeightingFn::power(uniform(rng, 0.3, 3.0));
        case 2:
            return WeightingFn::prelec(uniform(rng, 0.3, 1.5), uniform(rng, 0.5, 2.0));
        default:
            return WeightingFn::tversky_kahneman(uniform(rng, 0.3, 1.0));
    }
}

inline riskprem::WeightingFn weighting(std::mt19937_64& rng) {
    if (rng() % 5 == 0) return riskprem::WeightingFn::composed(transform(rng), base_weighting(rng));
    return base_weighting(rng);
}

inline riskprem::DecisionMaker agent(std::mt19937_64& rng) {
    riskprem::DecisionMaker dm;
    dm.utility = utility(rng);
    dm.weighting = weighting(rng);
    return dm;
}

/// eps2_fraction_max < 1 keeps p0 +- eps2 strictly inside (0, 1).
inline riskprem::Scenario scenario(const riskprem::UtilityFn& u, std::mt19937_64& rng,
                                   double eps2_fraction_max = 1.0) {
    riskprem::Scenario s;
    s.p0 = uniform(rng, 0.05, 0.95);
    const double cap = std::min(s.p0, 1.0 - s.p0);
    s.eps2 = cap * uniform(rng, 0.02, eps2_fraction_max);
    if (eps2_fraction_max >= 1.0 && rng() % 10 == 0) s.eps2 = cap;
    s.eps1 = uniform(rng, 0.01, 1.0);
    const riskprem::Interval d = u.domain();
    if (d.bounded_below()) {
        s.x0 = d.lo + s.eps1 + uniform(rng, 0.1, 3.0);
    } else if (d.bounded_above()) {
        s.x0 = d.hi - s.eps1 - uniform(rng, 0.1, 3.0);
    } else {
        s.x0 = uniform(rng, -2.0, 2.0);
    }
    return s;
}

}  // namespace gen
