// SPDX-License-Identifier: MIT
#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace riskprem {

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool contains(double x) const noexcept { return x > lo && x < hi; }
    [[nodiscard]] bool bounded_below() const noexcept { return lo > -std::numeric_limits<double>::infinity(); }
    [[nodiscard]] bool bounded_above() const noexcept { return hi < std::numeric_limits<double>::infinity(); }
};

/// 1001 equally spaced points on [1e-4, 1 - 1e-4]; used to validate h' > 0
/// and the curvature of transforms without touching endpoint singularities.
[[nodiscard]] std::span<const double> validation_grid();

// ---------------------------------------------------------------------------
// Utility functions
// ---------------------------------------------------------------------------

namespace utility {
struct Linear {};
/// U(x) = -exp(-a x) / a, so that -U''/U' = a. a < 0 gives a convex member.
struct Cara {
    double a;
};
/// U(x) = x^(1-eta) / (1-eta) on x > 0; eta == 1 is the log member.
struct Crra {
    double eta;
};
struct Log {};
/// U(x) = x - b x^2, restricted to the side of 1/(2b) where U' > 0.
struct Quadratic {
    double b;
};
}  // namespace utility

using UtilityFamily =
    std::variant<utility::Linear, utility::Cara, utility::Crra, utility::Log, utility::Quadratic>;

/// Strictly increasing, twice continuously differentiable payoff utility with
/// closed-form derivatives and inverse.
class UtilityFn {
public:
    [[nodiscard]] static UtilityFn linear();
    [[nodiscard]] static UtilityFn cara(double a);
    [[nodiscard]] static UtilityFn crra(double eta);
    [[nodiscard]] static UtilityFn log();
    [[nodiscard]] static UtilityFn quadratic(double b);

    /// Throws DomainError outside domain().
    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double d1(double x) const;
    [[nodiscard]] double d2(double x) const;
    /// Throws RangeError outside range().
    [[nodiscard]] double inverse(double t) const;

    /// -U''(x)/U'(x)
    [[nodiscard]] double absolute_risk_aversion(double x) const { return -d2(x) / d1(x); }

    [[nodiscard]] Interval domain() const noexcept;
    [[nodiscard]] Interval range() const noexcept;

    [[nodiscard]] bool is_linear() const noexcept {
        return std::holds_alternative<utility::Linear>(family_);
    }
    [[nodiscard]] const UtilityFamily& family() const noexcept { return family_; }

    /// Compact spec string, e.g. "cara:1". Parses back to an equal function.
    [[nodiscard]] std::string to_string() const;

private:
    explicit UtilityFn(UtilityFamily family);
    void check_domain(double x, const char* what) const;

    UtilityFamily family_;
};

// ---------------------------------------------------------------------------
// Concave transforms of the unit interval
// ---------------------------------------------------------------------------

namespace transform {
/// T(t) = t^kappa, 0 < kappa < 1.
struct Power {
    double kappa;
};
/// T(t) = (1 - exp(-c t)) / (1 - exp(-c)), c > 0; constant index -T''/T' = c.
struct Exponential {
    double c;
};
/// T(t) = (1 - w) t + w t^kappa, 0 < w <= 1, 0 < kappa < 1.
struct AffineBlend {
    double weight;
    double kappa;
};
}  // namespace transform

using TransformFamily = std::variant<transform::Power, transform::Exponential, transform::AffineBlend>;

/// Strictly increasing, strictly concave map of [0,1] onto itself.
class ConcaveTransform {
public:
    [[nodiscard]] static ConcaveTransform power(double kappa);
    [[nodiscard]] static ConcaveTransform exponential(double c);
    [[nodiscard]] static ConcaveTransform affine_blend(double weight, double kappa);

    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double d1(double t) const;
    [[nodiscard]] double d2(double t) const;
    [[nodiscard]] double inverse(double q) const;

    [[nodiscard]] const TransformFamily& family() const noexcept { return family_; }
    [[nodiscard]] std::string to_string() const;

private:
    explicit ConcaveTransform(TransformFamily family);
    void validate() const;

    TransformFamily family_;
};

// ---------------------------------------------------------------------------
// Probability weighting functions
// ---------------------------------------------------------------------------

class WeightingFn;

namespace weighting {
struct Identity {};
/// h(p) = p^theta, theta > 0.
struct Power {
    double theta;
};
/// h(p) = exp(-beta (-ln p)^alpha).
struct Prelec {
    double alpha;
    double beta;
};
/// h(p) = p^g / (p^g + (1-p)^g)^(1/g); rejected for g < 0.28.
struct TverskyKahneman {
    double gamma;
};
/// h(p) = T(base(p)).
struct Composed {
    ConcaveTransform transform;
    std::shared_ptr<const WeightingFn> base;
};
}  // namespace weighting

using WeightingFamily = std::variant<weighting::Identity, weighting::Power, weighting::Prelec,
                                     weighting::TverskyKahneman, weighting::Composed>;

inline constexpr double kTverskyKahnemanMinGamma = 0.28;

/// Probability distortion h: [0,1] -> [0,1], h(0) = 0, h(1) = 1, h' > 0.
///
/// value() and inverse() accept the closed unit interval; derivatives are
/// defined on the open interval only, since several families have divergent
/// slopes at the endpoints.
class WeightingFn {
public:
    [[nodiscard]] static WeightingFn identity();
    [[nodiscard]] static WeightingFn power(double theta);
    [[nodiscard]] static WeightingFn prelec(double alpha, double beta);
    [[nodiscard]] static WeightingFn tversky_kahneman(double gamma);
    [[nodiscard]] static WeightingFn composed(const ConcaveTransform& transform, const WeightingFn& base);

    [[nodiscard]] double value(double p) const;
    [[nodiscard]] double d1(double p) const;
    [[nodiscard]] double d2(double p) const;
    [[nodiscard]] double inverse(double q) const;

    /// 1 - h(1 - p): the distortion applied to decumulative probabilities.
    [[nodiscard]] double dual(double p) const;

    /// -h''(p)/h'(p)
    [[nodiscard]] double dual_index(double p) const { return -d2(p) / d1(p); }

    [[nodiscard]] bool is_identity() const noexcept {
        return std::holds_alternative<weighting::Identity>(family_);
    }
    [[nodiscard]] const WeightingFamily& family() const noexcept { return family_; }
    [[nodiscard]] std::string to_string() const;

private:
    explicit WeightingFn(WeightingFamily family);
    void validate() const;

    WeightingFamily family_;
};

/// h2 = T o h1.
[[nodiscard]] WeightingFn concavify(const WeightingFn& base, const ConcaveTransform& transform);

// Free-function spellings of the evaluation surface.
[[nodiscard]] inline double u_eval(const UtilityFn& f, double x) { return f.value(x); }
[[nodiscard]] inline double u_d1(const UtilityFn& f, double x) { return f.d1(x); }
[[nodiscard]] inline double u_d2(const UtilityFn& f, double x) { return f.d2(x); }
[[nodiscard]] inline double u_inverse(const UtilityFn& f, double t) { return f.inverse(t); }
[[nodiscard]] inline double h_eval(const WeightingFn& g, double p) { return g.value(p); }
[[nodiscard]] inline double h_d1(const WeightingFn& g, double p) { return g.d1(p); }
[[nodiscard]] inline double h_d2(const WeightingFn& g, double p) { return g.d2(p); }
[[nodiscard]] inline double h_inverse(const WeightingFn& g, double q) { return g.inverse(q); }
[[nodiscard]] inline double h_dual(const WeightingFn& g, double p) { return g.dual(p); }

}  // namespace riskprem
