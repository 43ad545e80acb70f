// SPDX-License-Identifier: MIT
#include "riskprem/funclib.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "riskprem/errors.hpp"
#include "riskprem/numerics.hpp"

namespace riskprem {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest %g rendering that parses back to the same double.
std::string fmt_param(double v) {
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ParameterError(std::string(what) + ": parameter must be finite");
    }
}

void check_unit_closed(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(std::string(what) + ": probability " + fmt_param(p) +
                          " outside [0, 1]");
    }
}

void check_unit_open(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(what) + ": probability " + fmt_param(p) +
                          " outside (0, 1)");
    }
}

// Inverse of an increasing map of [0,1] onto itself by bracketed root finding.
template <class F>
double invert_unit_map(const F& f, double q) {
    if (q <= 0.0) return 0.0;
    if (q >= 1.0) return 1.0;
    RootSpec spec{[&](double p) { return f(p) - q; }, 0.0, 1.0, 1e-15, 200};
    return find_root(spec);
}

}  // namespace

std::span<const double> validation_grid() {
    static const std::array<double, 1001> grid = [] {
        std::array<double, 1001> g{};
        constexpr double lo = 1e-4;
        constexpr double hi = 1.0 - 1e-4;
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] = lo + (hi - lo) * static_cast<double>(i) / 1000.0;
        }
        return g;
    }();
    return grid;
}

// ---------------------------------------------------------------------------
// UtilityFn
// ---------------------------------------------------------------------------

UtilityFn::UtilityFn(UtilityFamily family) : family_(family) {
    // U' > 0 on a 1001-point window of the domain
    const Interval dom = domain();
    double lo = -10.0, hi = 10.0;
    if (const auto* c = std::get_if<utility::Cara>(&family_)) {
        lo = -10.0 / std::abs(c->a);
        hi = 10.0 / std::abs(c->a);
    } else if (dom.bounded_below() && dom.bounded_above()) {
        lo = dom.lo;
        hi = dom.hi;
    } else if (dom.bounded_below()) {
        lo = dom.lo;
        // x^-eta underflows early for large eta
        hi = std::holds_alternative<utility::Crra>(family_) ? dom.lo + 2.0 : dom.lo + 20.0;
    } else if (dom.bounded_above()) {
        lo = dom.hi - 20.0;
        hi = dom.hi;
    }
    for (int i = 1; i <= 1001; ++i) {
        const double x = lo + (hi - lo) * i / 1002.0;
        if (!(d1(x) > 0.0)) {
            throw MonotonicityError("utility " + to_string() + ": U' <= 0 at x=" + fmt_param(x));
        }
    }
}

UtilityFn UtilityFn::linear() { return UtilityFn(utility::Linear{}); }

UtilityFn UtilityFn::cara(double a) {
    require_finite(a, "cara");
    if (a == 0.0) throw ParameterError("cara: coefficient must be nonzero (use linear)");
    return UtilityFn(utility::Cara{a});
}

UtilityFn UtilityFn::crra(double eta) {
    require_finite(eta, "crra");
    return UtilityFn(utility::Crra{eta});
}

UtilityFn UtilityFn::log() { return UtilityFn(utility::Log{}); }

UtilityFn UtilityFn::quadratic(double b) {
    require_finite(b, "quadratic");
    if (b == 0.0) throw ParameterError("quadratic: coefficient must be nonzero (use linear)");
    return UtilityFn(utility::Quadratic{b});
}

Interval UtilityFn::domain() const noexcept {
    return std::visit(Overloaded{
                          [](const utility::Linear&) { return Interval{}; },
                          [](const utility::Cara&) { return Interval{}; },
                          [](const utility::Crra&) { return Interval{0.0, kInf}; },
                          [](const utility::Log&) { return Interval{0.0, kInf}; },
                          [](const utility::Quadratic& q) {
                              const double peak = 1.0 / (2.0 * q.b);
                              return q.b > 0.0 ? Interval{-kInf, peak} : Interval{peak, kInf};
                          },
                      },
                      family_);
}

Interval UtilityFn::range() const noexcept {
    return std::visit(Overloaded{
                          [](const utility::Linear&) { return Interval{}; },
                          [](const utility::Cara& c) {
                              return c.a > 0.0 ? Interval{-kInf, 0.0} : Interval{0.0, kInf};
                          },
                          [](const utility::Crra& c) {
                              if (c.eta == 1.0) return Interval{};
                              return c.eta < 1.0 ? Interval{0.0, kInf} : Interval{-kInf, 0.0};
                          },
                          [](const utility::Log&) { return Interval{}; },
                          [](const utility::Quadratic& q) {
                              const double top = 1.0 / (4.0 * q.b);
                              return q.b > 0.0 ? Interval{-kInf, top} : Interval{top, kInf};
                          },
                      },
                      family_);
}

void UtilityFn::check_domain(double x, const char* what) const {
    if (!domain().contains(x)) {
        throw DomainError(std::string(what) + ": payoff " + fmt_param(x) +
                          " outside domain of " + to_string());
    }
}

double UtilityFn::value(double x) const {
    check_domain(x, "utility");
    return std::visit(Overloaded{
                          [&](const utility::Linear&) { return x; },
                          [&](const utility::Cara& c) { return -std::exp(-c.a * x) / c.a; },
                          [&](const utility::Crra& c) {
                              if (c.eta == 1.0) return std::log(x);
                              return std::pow(x, 1.0 - c.eta) / (1.0 - c.eta);
                          },
                          [&](const utility::Log&) { return std::log(x); },
                          [&](const utility::Quadratic& q) { return x - q.b * x * x; },
                      },
                      family_);
}

double UtilityFn::d1(double x) const {
    check_domain(x, "utility derivative");
    return std::visit(Overloaded{
                          [&](const utility::Linear&) { return 1.0; },
                          [&](const utility::Cara& c) { return std::exp(-c.a * x); },
                          [&](const utility::Crra& c) { return std::pow(x, -c.eta); },
                          [&](const utility::Log&) { return 1.0 / x; },
                          [&](const utility::Quadratic& q) { return 1.0 - 2.0 * q.b * x; },
                      },
                      family_);
}

double UtilityFn::d2(double x) const {
    check_domain(x, "utility second derivative");
    return std::visit(Overloaded{
                          [&](const utility::Linear&) { return 0.0; },
                          [&](const utility::Cara& c) { return -c.a * std::exp(-c.a * x); },
                          [&](const utility::Crra& c) { return -c.eta * std::pow(x, -c.eta - 1.0); },
                          [&](const utility::Log&) { return -1.0 / (x * x); },
                          [&](const utility::Quadratic& q) { return -2.0 * q.b; },
                      },
                      family_);
}

double UtilityFn::inverse(double t) const {
    if (!range().contains(t)) {
        throw RangeError("utility inverse: value " + fmt_param(t) + " outside range of " +
                         to_string());
    }
    return std::visit(Overloaded{
                          [&](const utility::Linear&) { return t; },
                          [&](const utility::Cara& c) { return -std::log(-c.a * t) / c.a; },
                          [&](const utility::Crra& c) {
                              if (c.eta == 1.0) return std::exp(t);
                              return std::pow((1.0 - c.eta) * t, 1.0 / (1.0 - c.eta));
                          },
                          [&](const utility::Log&) { return std::exp(t); },
                          [&](const utility::Quadratic& q) {
                              // smaller root of b x^2 - x + t = 0, written without cancellation
                              return 2.0 * t / (1.0 + std::sqrt(1.0 - 4.0 * q.b * t));
                          },
                      },
                      family_);
}

std::string UtilityFn::to_string() const {
    return std::visit(Overloaded{
                          [](const utility::Linear&) { return std::string("linear"); },
                          [](const utility::Cara& c) { return "cara:" + fmt_param(c.a); },
                          [](const utility::Crra& c) { return "crra:" + fmt_param(c.eta); },
                          [](const utility::Log&) { return std::string("log"); },
                          [](const utility::Quadratic& q) { return "quadratic:" + fmt_param(q.b); },
                      },
                      family_);
}

// ---------------------------------------------------------------------------
// ConcaveTransform
// ---------------------------------------------------------------------------

ConcaveTransform::ConcaveTransform(TransformFamily family) : family_(family) { validate(); }

ConcaveTransform ConcaveTransform::power(double kappa) {
    require_finite(kappa, "power transform");
    if (!(kappa > 0.0 && kappa < 1.0)) {
        throw ParameterError("power transform: kappa must lie in (0, 1)");
    }
    return ConcaveTransform(transform::Power{kappa});
}

ConcaveTransform ConcaveTransform::exponential(double c) {
    require_finite(c, "exponential transform");
    if (!(c > 0.0)) throw ParameterError("exponential transform: c must be positive");
    return ConcaveTransform(transform::Exponential{c});
}

ConcaveTransform ConcaveTransform::affine_blend(double weight, double kappa) {
    require_finite(weight, "blend transform");
    require_finite(kappa, "blend transform");
    if (!(weight > 0.0 && weight <= 1.0)) {
        throw ParameterError("blend transform: weight must lie in (0, 1]");
    }
    if (!(kappa > 0.0 && kappa < 1.0)) {
        throw ParameterError("blend transform: kappa must lie in (0, 1)");
    }
    return ConcaveTransform(transform::AffineBlend{weight, kappa});
}

void ConcaveTransform::validate() const {
    for (double t : validation_grid()) {
        const double s1 = d1(t);
        const double s2 = d2(t);
        if (!(s1 > 0.0)) {
            throw MonotonicityError("transform " + to_string() + ": T' <= 0 at t=" + fmt_param(t));
        }
        if (!(s2 < 0.0)) {
            throw MonotonicityError("transform " + to_string() + ": T'' >= 0 at t=" + fmt_param(t));
        }
    }
}

double ConcaveTransform::value(double t) const {
    check_unit_closed(t, "transform");
    if (t == 0.0) return 0.0;
    if (t == 1.0) return 1.0;
    return std::visit(Overloaded{
                          [&](const transform::Power& f) { return std::pow(t, f.kappa); },
                          [&](const transform::Exponential& f) {
                              return std::expm1(-f.c * t) / std::expm1(-f.c);
                          },
                          [&](const transform::AffineBlend& f) {
                              return (1.0 - f.weight) * t + f.weight * std::pow(t, f.kappa);
                          },
                      },
                      family_);
}

double ConcaveTransform::d1(double t) const {
    return std::visit(Overloaded{
                          [&](const transform::Power& f) { return f.kappa * std::pow(t, f.kappa - 1.0); },
                          [&](const transform::Exponential& f) {
                              return -f.c * std::exp(-f.c * t) / std::expm1(-f.c);
                          },
                          [&](const transform::AffineBlend& f) {
                              return (1.0 - f.weight) + f.weight * f.kappa * std::pow(t, f.kappa - 1.0);
                          },
                      },
                      family_);
}

double ConcaveTransform::d2(double t) const {
    return std::visit(Overloaded{
                          [&](const transform::Power& f) {
                              return f.kappa * (f.kappa - 1.0) * std::pow(t, f.kappa - 2.0);
                          },
                          [&](const transform::Exponential& f) {
                              return f.c * f.c * std::exp(-f.c * t) / std::expm1(-f.c);
                          },
                          [&](const transform::AffineBlend& f) {
                              return f.weight * f.kappa * (f.kappa - 1.0) * std::pow(t, f.kappa - 2.0);
                          },
                      },
                      family_);
}

double ConcaveTransform::inverse(double q) const {
    check_unit_closed(q, "transform inverse");
    if (q == 0.0) return 0.0;
    if (q == 1.0) return 1.0;
    return std::visit(Overloaded{
                          [&](const transform::Power& f) { return std::pow(q, 1.0 / f.kappa); },
                          [&](const transform::Exponential& f) {
                              return -std::log1p(q * std::expm1(-f.c)) / f.c;
                          },
                          [&](const transform::AffineBlend&) {
                              return invert_unit_map([this](double t) { return value(t); }, q);
                          },
                      },
                      family_);
}

std::string ConcaveTransform::to_string() const {
    return std::visit(Overloaded{
                          [](const transform::Power& f) { return "power:" + fmt_param(f.kappa); },
                          [](const transform::Exponential& f) { return "exp:" + fmt_param(f.c); },
                          [](const transform::AffineBlend& f) {
                              return "blend:" + fmt_param(f.weight) + "," + fmt_param(f.kappa);
                          },
                      },
                      family_);
}

// ---------------------------------------------------------------------------
// WeightingFn
// ---------------------------------------------------------------------------

WeightingFn::WeightingFn(WeightingFamily family) : family_(std::move(family)) { validate(); }

WeightingFn WeightingFn::identity() { return WeightingFn(weighting::Identity{}); }

WeightingFn WeightingFn::power(double theta) {
    require_finite(theta, "power weighting");
    if (!(theta > 0.0)) throw ParameterError("power weighting: theta must be positive");
    return WeightingFn(weighting::Power{theta});
}

WeightingFn WeightingFn::prelec(double alpha, double beta) {
    require_finite(alpha, "prelec");
    require_finite(beta, "prelec");
    if (!(alpha > 0.0 && beta > 0.0)) {
        throw ParameterError("prelec: alpha and beta must be positive");
    }
    return WeightingFn(weighting::Prelec{alpha, beta});
}

WeightingFn WeightingFn::tversky_kahneman(double gamma) {
    require_finite(gamma, "tk");
    if (!(gamma >= kTverskyKahnemanMinGamma)) {
        throw MonotonicityError("tk: gamma " + fmt_param(gamma) +
                                " below monotonicity threshold 0.28");
    }
    return WeightingFn(weighting::TverskyKahneman{gamma});
}

WeightingFn WeightingFn::composed(const ConcaveTransform& transform, const WeightingFn& base) {
    return WeightingFn(weighting::Composed{transform, std::make_shared<const WeightingFn>(base)});
}

WeightingFn concavify(const WeightingFn& base, const ConcaveTransform& transform) {
    return WeightingFn::composed(transform, base);
}

void WeightingFn::validate() const {
    for (double p : validation_grid()) {
        const double slope = d1(p);
        if (!(slope > 0.0)) {
            throw MonotonicityError("weighting " + to_string() + ": h' <= 0 at p=" + fmt_param(p));
        }
    }
}

double WeightingFn::value(double p) const {
    check_unit_closed(p, "weighting");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    return std::visit(Overloaded{
                          [&](const weighting::Identity&) { return p; },
                          [&](const weighting::Power& f) { return std::pow(p, f.theta); },
                          [&](const weighting::Prelec& f) {
                              return std::exp(-f.beta * std::pow(-std::log(p), f.alpha));
                          },
                          [&](const weighting::TverskyKahneman& f) {
                              const double a = std::pow(p, f.gamma);
                              const double b = std::pow(1.0 - p, f.gamma);
                              return a / std::pow(a + b, 1.0 / f.gamma);
                          },
                          [&](const weighting::Composed& f) { return f.transform.value(f.base->value(p)); },
                      },
                      family_);
}

double WeightingFn::d1(double p) const {
    check_unit_open(p, "weighting derivative");
    return std::visit(Overloaded{
                          [&](const weighting::Identity&) { return 1.0; },
                          [&](const weighting::Power& f) { return f.theta * std::pow(p, f.theta - 1.0); },
                          [&](const weighting::Prelec& f) {
                              const double L = -std::log(p);
                              const double h = std::exp(-f.beta * std::pow(L, f.alpha));
                              return h * f.beta * f.alpha * std::pow(L, f.alpha - 1.0) / p;
                          },
                          [&](const weighting::TverskyKahneman& f) {
                              const double g = f.gamma;
                              const double a = std::pow(p, g);
                              const double b = std::pow(1.0 - p, g);
                              const double s = a + b;
                              const double h = a / std::pow(s, 1.0 / g);
                              // d/dp ln h
                              const double k = g / p - (a / p - b / (1.0 - p)) / s;
                              return h * k;
                          },
                          [&](const weighting::Composed& f) {
                              return f.transform.d1(f.base->value(p)) * f.base->d1(p);
                          },
                      },
                      family_);
}

double WeightingFn::d2(double p) const {
    check_unit_open(p, "weighting second derivative");
    return std::visit(
        Overloaded{
            [&](const weighting::Identity&) { return 0.0; },
            [&](const weighting::Power& f) {
                return f.theta * (f.theta - 1.0) * std::pow(p, f.theta - 2.0);
            },
            [&](const weighting::Prelec& f) {
                const double L = -std::log(p);
                const double ab = f.alpha * f.beta;
                const double h = std::exp(-f.beta * std::pow(L, f.alpha));
                const double g = ab * std::pow(L, f.alpha - 1.0) / p;
                const double dg =
                    -ab / (p * p) * ((f.alpha - 1.0) * std::pow(L, f.alpha - 2.0) + std::pow(L, f.alpha - 1.0));
                return h * (g * g + dg);
            },
            [&](const weighting::TverskyKahneman& f) {
                const double g = f.gamma;
                const double q = 1.0 - p;
                const double a = std::pow(p, g);
                const double b = std::pow(q, g);
                const double s = a + b;
                const double h = a / std::pow(s, 1.0 / g);
                const double m = a / p - b / q;  // p^(g-1) - (1-p)^(g-1)
                const double k = g / p - m / s;
                const double dk = -g / (p * p) - (g - 1.0) * (a / (p * p) + b / (q * q)) / s +
                                  g * m * m / (s * s);
                return h * (k * k + dk);
            },
            [&](const weighting::Composed& f) {
                const double hb = f.base->value(p);
                const double s1 = f.base->d1(p);
                return f.transform.d2(hb) * s1 * s1 + f.transform.d1(hb) * f.base->d2(p);
            },
        },
        family_);
}

double WeightingFn::inverse(double q) const {
    check_unit_closed(q, "weighting inverse");
    if (q == 0.0) return 0.0;
    if (q == 1.0) return 1.0;
    return std::visit(Overloaded{
                          [&](const weighting::Identity&) { return q; },
                          [&](const weighting::Power& f) { return std::pow(q, 1.0 / f.theta); },
                          [&](const weighting::Prelec& f) {
                              const double L = std::pow(-std::log(q) / f.beta, 1.0 / f.alpha);
                              return std::exp(-L);
                          },
                          [&](const weighting::TverskyKahneman&) {
                              return invert_unit_map([this](double p) { return value(p); }, q);
                          },
                          [&](const weighting::Composed& f) {
                              return f.base->inverse(f.transform.inverse(q));
                          },
                      },
                      family_);
}

double WeightingFn::dual(double p) const {
    check_unit_closed(p, "dual weighting");
    return 1.0 - value(1.0 - p);
}

std::string WeightingFn::to_string() const {
    return std::visit(Overloaded{
                          [](const weighting::Identity&) { return std::string("identity"); },
                          [](const weighting::Power& f) { return "power:" + fmt_param(f.theta); },
                          [](const weighting::Prelec& f) {
                              return "prelec:" + fmt_param(f.alpha) + "," + fmt_param(f.beta);
                          },
                          [](const weighting::TverskyKahneman& f) { return "tk:" + fmt_param(f.gamma); },
                          [](const weighting::Composed& f) {
                              return "composed:" + f.transform.to_string() + "@" + f.base->to_string();
                          },
                      },
                      family_);
}

}  // namespace riskprem
