// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "riskprem/errors.hpp"
#include "riskprem/funclib.hpp"
#include "riskprem/spec_parse.hpp"

using namespace riskprem;

namespace {

std::vector<UtilityFn> utilities() {
    return {UtilityFn::linear(),    UtilityFn::cara(1.0),  UtilityFn::cara(-0.7),     UtilityFn::crra(0.5),
            UtilityFn::crra(1.0),   UtilityFn::crra(3.0),  UtilityFn::log(),          UtilityFn::quadratic(0.2),
            UtilityFn::quadratic(-0.1)};
}

std::vector<WeightingFn> weightings() {
    return {WeightingFn::identity(),
            WeightingFn::power(0.5),
            WeightingFn::power(2.0),
            WeightingFn::prelec(0.65, 1.0),
            WeightingFn::prelec(1.3, 0.8),
            WeightingFn::tversky_kahneman(0.61),
            WeightingFn::tversky_kahneman(0.28),
            WeightingFn::composed(ConcaveTransform::power(0.5), WeightingFn::prelec(0.65, 1.0)),
            WeightingFn::composed(ConcaveTransform::exponential(2.0), WeightingFn::power(1.5)),
            WeightingFn::composed(ConcaveTransform::affine_blend(0.4, 0.3), WeightingFn::tversky_kahneman(0.7))};
}

std::vector<double> sample_x(const UtilityFn& u) {
    const Interval d = u.domain();
    if (d.bounded_below()) return {d.lo + 0.3, d.lo + 1.0, d.lo + 2.7};
    if (d.bounded_above()) return {d.hi - 2.7, d.hi - 1.0, d.hi - 0.3};
    return {-1.3, 0.0, 0.8};
}

}  // namespace

TEST_CASE("utility derivatives match finite differences") {
    for (const auto& u : utilities()) {
        CAPTURE(u.to_string());
        for (double x : sample_x(u)) {
            CAPTURE(x);
            const auto f = [&](double t) { return u.value(t); };
            const auto g = [&](double t) { return u.d1(t); };
            CHECK(oracle::rel_err(u.d1(x), oracle::fd1(f, x), 1e-8) < 1e-6);
            if (u.d2(x) != 0.0) CHECK(oracle::rel_err(u.d2(x), oracle::fd1(g, x), 1e-8) < 1e-6);
        }
    }
}

TEST_CASE("utility inverse round-trips") {
    for (const auto& u : utilities()) {
        CAPTURE(u.to_string());
        for (double x : sample_x(u)) CHECK(std::abs(u.inverse(u.value(x)) - x) < 1e-12 * (1 + std::abs(x)));
    }
}

TEST_CASE("utility closed forms") {
    CHECK(UtilityFn::cara(2.0).value(0.5) == doctest::Approx(-std::exp(-1.0) / 2.0).epsilon(1e-15));
    CHECK(UtilityFn::crra(1.0).value(2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(UtilityFn::crra(3.0).value(2.0) == doctest::Approx(std::pow(2.0, -2.0) / -2.0).epsilon(1e-15));
    CHECK(UtilityFn::quadratic(0.25).value(1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(UtilityFn::cara(1.5).absolute_risk_aversion(0.7) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(UtilityFn::crra(2.0).absolute_risk_aversion(4.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(UtilityFn::linear().is_linear());
}

TEST_CASE("utility domain and parameter errors") {
    CHECK_THROWS_AS((void)UtilityFn::log().value(-1.0), DomainError);
    CHECK_THROWS_AS((void)UtilityFn::crra(2.0).d1(0.0), DomainError);
    CHECK_THROWS_AS((void)UtilityFn::quadratic(0.5).value(2.0), DomainError);
    CHECK_THROWS_AS((void)UtilityFn::cara(0.0), ParameterError);
    CHECK_THROWS_AS((void)UtilityFn::crra(std::nan("")), ParameterError);
    CHECK(UtilityFn::crra(-1.0).absolute_risk_aversion(2.0) == doctest::Approx(-0.5));
    CHECK_THROWS_AS((void)UtilityFn::cara(std::nan("")), ParameterError);
    CHECK_THROWS_AS((void)UtilityFn::quadratic(0.0), ParameterError);
    CHECK_THROWS_AS((void)UtilityFn::cara(1.0).inverse(1.0), RangeError);
}

TEST_CASE("weighting endpoints are exact") {
    for (const auto& h : weightings()) {
        CAPTURE(h.to_string());
        CHECK(h.value(0.0) == 0.0);
        CHECK(h.value(1.0) == 1.0);
        CHECK(h.inverse(0.0) == 0.0);
        CHECK(h.inverse(1.0) == 1.0);
        CHECK_THROWS_AS((void)h.value(-0.1), DomainError);
        CHECK_THROWS_AS((void)h.value(1.1), DomainError);
        CHECK_THROWS_AS((void)h.d1(0.0), DomainError);
        CHECK_THROWS_AS((void)h.d2(1.0), DomainError);
    }
}

TEST_CASE("weighting derivatives match finite differences") {
    for (const auto& h : weightings()) {
        CAPTURE(h.to_string());
        for (double p : {0.05, 0.2, 0.5, 0.77, 0.95}) {
            CAPTURE(p);
            const auto f = [&](double t) { return h.value(t); };
            const auto g = [&](double t) { return h.d1(t); };
            CHECK(oracle::rel_err(h.d1(p), oracle::fd1(f, p), 1e-3) < 1e-6);
            CHECK(oracle::rel_err(h.d2(p), oracle::fd1(g, p), 1e-3) < 1e-6);
        }
    }
}

TEST_CASE("weighting inverse round-trips") {
    for (const auto& h : weightings()) {
        CAPTURE(h.to_string());
        for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999999}) {
            CHECK(std::abs(h.inverse(h.value(p)) - p) < 1e-12);
        }
    }
}

TEST_CASE("dual weighting: involution and curvature flip") {
    for (const auto& h : weightings()) {
        CAPTURE(h.to_string());
        for (double p : {0.1, 0.25, 0.5, 0.8}) {
            // one rounding of 1 - p separates h from its double dual
            CHECK(std::abs(1.0 - h.dual(1.0 - p) - h.value(p)) < 1e-15);
            CHECK(std::abs(h.dual(p) - (1.0 - h.value(1.0 - p))) == 0.0);
            // hbar''(p) = -h''(1-p)
            const double d2_dual = oracle::fd2([&](double t) { return h.dual(t); }, p);
            if (std::abs(h.d2(1.0 - p)) > 1e-3) {
                CHECK((h.d2(1.0 - p) < 0) == (d2_dual > 0));
            }
        }
    }
    CHECK(WeightingFn::power(2.0).dual(0.5) == doctest::Approx(0.75));
}

TEST_CASE("weighting closed forms and indexes") {
    CHECK(WeightingFn::power(2.0).value(0.3) == doctest::Approx(0.09).epsilon(1e-15));
    CHECK(WeightingFn::prelec(0.65, 1.0).value(std::exp(-1.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    const double g = 0.61, p = 0.3;
    const double tk = std::pow(p, g) / std::pow(std::pow(p, g) + std::pow(1 - p, g), 1 / g);
    CHECK(WeightingFn::tversky_kahneman(g).value(p) == doctest::Approx(tk).epsilon(1e-14));
    // power(theta): -h''/h' = (1 - theta)/p
    CHECK(WeightingFn::power(0.5).dual_index(0.25) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(WeightingFn::identity().dual_index(0.4) == 0.0);
}

TEST_CASE("tversky-kahneman monotonicity threshold") {
    CHECK_NOTHROW((void)WeightingFn::tversky_kahneman(0.28));
    CHECK_THROWS_AS((void)WeightingFn::tversky_kahneman(0.279), MonotonicityError);
    CHECK_THROWS_AS((void)WeightingFn::tversky_kahneman(0.2), MonotonicityError);
    // and the derivative really does go negative somewhere below the threshold
    const auto h = [](double p) {
        const double g = 0.2;
        return std::pow(p, g) / std::pow(std::pow(p, g) + std::pow(1 - p, g), 1 / g);
    };
    bool negative = false;
    for (int i = 1; i < 1000; ++i) negative = negative || h(i / 1000.0 + 1e-3) < h(i / 1000.0);
    CHECK(negative);
}

TEST_CASE("weighting parameter errors") {
    CHECK_THROWS_AS((void)WeightingFn::power(0.0), ParameterError);
    CHECK_THROWS_AS((void)WeightingFn::prelec(-0.5, 1.0), ParameterError);
    CHECK_THROWS_AS((void)WeightingFn::prelec(0.5, 0.0), ParameterError);
    CHECK_THROWS_AS((void)ConcaveTransform::power(1.0), ParameterError);
    CHECK_THROWS_AS((void)ConcaveTransform::exponential(0.0), ParameterError);
    CHECK_THROWS_AS((void)ConcaveTransform::affine_blend(0.0, 0.5), ParameterError);
}

TEST_CASE("transforms are increasing and concave with exact endpoints") {
    for (const auto& t : {ConcaveTransform::power(0.4), ConcaveTransform::exponential(3.0),
                          ConcaveTransform::affine_blend(0.5, 0.3)}) {
        CAPTURE(t.to_string());
        CHECK(t.value(0.0) == 0.0);
        CHECK(t.value(1.0) == 1.0);
        for (double x : {0.1, 0.4, 0.9}) {
            CHECK(t.d1(x) > 0.0);
            CHECK(t.d2(x) < 0.0);
            CHECK(oracle::rel_err(t.d1(x), oracle::fd1([&](double s) { return t.value(s); }, x), 1e-3) < 1e-6);
            CHECK(oracle::rel_err(t.d2(x), oracle::fd1([&](double s) { return t.d1(s); }, x), 1e-3) < 1e-6);
            CHECK(std::abs(t.inverse(t.value(x)) - x) < 1e-12);
        }
    }
}

TEST_CASE("concavification raises the dual index everywhere") {
    for (const auto& base : weightings()) {
        for (const auto& t : {ConcaveTransform::power(0.5), ConcaveTransform::exponential(1.5)}) {
            const WeightingFn c = concavify(base, t);
            for (double p = 0.01; p < 1.0; p += 0.049) {
                // -(T o h)''/(T o h)' = -T''/T' h' + (-h''/h')
                const double expected = -t.d2(base.value(p)) / t.d1(base.value(p)) * base.d1(p) + base.dual_index(p);
                CHECK(c.dual_index(p) > base.dual_index(p));
                CHECK(std::abs(c.dual_index(p) - expected) < 1e-10 * (1.0 + std::abs(expected)));
            }
        }
    }
}

TEST_CASE("spec strings and JSON round-trip") {
    for (const auto& u : utilities()) {
        CHECK(parse_utility(u.to_string()).to_string() == u.to_string());
        CHECK(utility_from_json(nlohmann::json::parse(to_json(u).dump())).to_string() == u.to_string());
    }
    for (const auto& h : weightings()) {
        CHECK(parse_weighting(h.to_string()).to_string() == h.to_string());
        CHECK(weighting_from_json(nlohmann::json::parse(to_json(h).dump())).to_string() == h.to_string());
    }
    CHECK(to_json(UtilityFn::cara(1.0)).dump() == R"({"family":"cara","params":[1.0]})");
    CHECK(utility_from_spec(R"({"family": "crra", "params": [2]})").to_string() == "crra:2");
    CHECK(weighting_from_spec("tversky_kahneman:0.61").to_string() == "tk:0.61");
}

TEST_CASE("spec parse errors") {
    CHECK_THROWS_AS((void)parse_utility("cara"), ParseError);
    CHECK_THROWS_AS((void)parse_utility("cara:x"), ParseError);
    CHECK_THROWS_AS((void)parse_utility("banana:1"), ParseError);
    CHECK_THROWS_AS((void)parse_weighting("prelec:0.5"), ParseError);
    CHECK_THROWS_AS((void)parse_weighting("composed:power:0.5"), ParseError);
    CHECK_THROWS_AS((void)weighting_from_spec("{\"family\": 3}"), ParseError);
    CHECK_THROWS_AS((void)utility_from_spec("{not json"), ParseError);
    CHECK_THROWS_AS((void)parse_utility("cara:0"), ParameterError);
}
