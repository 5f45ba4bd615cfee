#include "vortex/reduction.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vortex;

TEST_CASE("leading pair multiplier") {
    ModelParams p = make_params(Regime::pair_sch, 0.05, 0.25, 1.0);
    const double pi = std::numbers::pi;
    CHECK(leading_c(10.0, p) == doctest::Approx(-pi / 40.0 + pi * 0.05 / 4.0 - pi * 0.05 * 0.25 / 2.0));
    CHECK(std::abs(leading_c(predict_d(p), p)) < 1e-15);
    CHECK(predict_d(p) == doctest::Approx(40.0));
    CHECK(predict_d(make_params(Regime::pair_wm, 0.05, 0.0, 1.0)) == doctest::Approx(20.0));
    CHECK_THROWS(leading_c(1.0, p));
}

TEST_CASE("leading ring multiplier and its root") {
    ModelParams p = make_params(Regime::ring_wm, 0.05, 0.0, 1.0);
    double target = 2.0 * 0.05 * std::abs(std::log(0.05));
    // independent Newton iteration on log(d)/d = target from the right of e
    double d = 10.0;
    for (int k = 0; k < 60; ++k) {
        double f = std::log(d) / d - target, df = (1.0 - std::log(d)) / (d * d);
        d -= f / df;
    }
    CHECK(d == doctest::Approx(5.957).epsilon(1e-3));
    CHECK(predict_d(p) == doctest::Approx(d).epsilon(1e-9));
    CHECK(std::abs(leading_c(predict_d(p), p)) < 1e-12);
    // past the maximum of log(d)/d there is no balanced ring
    CHECK_THROWS(predict_d(make_params(Regime::ring_wm, 0.2, 0.0, 1.0)));
}

TEST_CASE("curve roots by linear interpolation") {
    ReducedCurve c;
    c.d_values = {1.0, 2.0, 3.0, 4.0};
    c.c_values = {-1.0, -0.5, 0.5, std::nan("")};
    auto r = curve_roots(c);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(2.5));
}

TEST_CASE("numeric curve on a coarse grid changes sign near the prediction") {
    ModelParams p = make_params(Regime::pair_wm, 0.2, 0.0, 1.0);
    VortexProfile prof = solve_profile();
    ReducedCurve c = numeric_c_curve(p, {3.0, 5.0, 8.0, 12.0}, 0.5, prof);
    CHECK(c.complete);
    CHECK(c.d_ref == 3.0);
    auto roots = curve_roots(c);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(5.0).epsilon(0.5));
}
