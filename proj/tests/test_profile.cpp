#include "vortex/profile.hpp"

#include <doctest.h>

#include <cmath>

using namespace vortex;

namespace {

const VortexProfile& profile() {
    static const VortexProfile p = solve_profile();
    return p;
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
    double h = (b - a) / n, acc = f(a) + f(b);
    for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("profile is monotone between 0 and 1") {
    const auto& p = profile();
    REQUIRE(p.knots.size() > 100);
    for (std::size_t k = 1; k < p.knots.size(); ++k) {
        CHECK(p.rho[k] > 0.0);
        CHECK(p.rho[k] < 1.0);
        CHECK(p.drho[k] > 0.0);
    }
}

TEST_CASE("profile solves the ODE and starts linearly") {
    const auto& p = profile();
    double worst = 0.0;
    for (std::size_t k = 2; k + 2 < p.knots.size(); ++k) worst = std::max(worst, std::abs(profile_ode_residual(p, k)));
    CHECK(worst <= 1e-8);
    double l = p.knots[10];
    CHECK(p.rho[10] / l == doctest::Approx(p.slope_a).epsilon(1e-4));
    CHECK_THROWS(profile_ode_residual(p, 0));
}

TEST_CASE("profile tail decays like exp(-ell)/sqrt(ell)") {
    CHECK(profile_tail_slope(profile()) == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("profile integrals match the closed forms in t = rho^2") {
    // int rho rho' g(rho^2) dell = 1/2 int_0^1 g(t) dt
    double i1 = 0.5 * simpson([](double t) { return 1.0 / ((1 + t) * (1 + t)); }, 0.0, 1.0, 2000);
    double i2 = 0.5 * simpson([](double t) { return (1 - t) / ((1 + t) * (1 + t) * (1 + t)); }, 0.0, 1.0, 2000);
    auto in = profile_integrals(profile());
    CHECK(std::abs(in.i1 - i1) <= 1e-6);
    CHECK(std::abs(in.i2 - i2) <= 1e-6);
    CHECK(std::abs(i1 - 0.25) <= 1e-12);
    CHECK(std::abs(i2 - 0.125) <= 1e-12);
}

TEST_CASE("cumulative integrals increase towards the totals") {
    const auto& p = profile();
    double prev = 0.0;
    for (double u : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
        double v = profile_integrals(p, u).i1;
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev < profile_integrals(p).i1);
}

TEST_CASE("eval_profile reproduces knot values and saturates beyond the last knot") {
    const auto& p = profile();
    auto [r, dr] = eval_profile(p, p.knots[1234]);
    CHECK(r == doctest::Approx(p.rho[1234]).epsilon(1e-12));
    CHECK(dr == doctest::Approx(p.drho[1234]).epsilon(1e-10));
    auto [rf, drf] = eval_profile(p, 200.0);
    CHECK(rf == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(drf) < 1e-12);
}

TEST_CASE("tail extension joins the last knot") {
    const auto& p = profile();
    double end = p.knots.back();
    auto [r, dr] = eval_profile(p, end * (1.0 + 1e-12));
    CHECK(std::abs(r - p.rho.back()) < 1e-10);
    CHECK(std::abs(dr - p.drho.back()) < 1e-10);
}
