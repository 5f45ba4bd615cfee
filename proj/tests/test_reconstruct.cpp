#include "vortex/reconstruct.hpp"

#include <doctest.h>

#include <cmath>

using namespace vortex;

namespace {

// Quintic B-spline by the truncated-power formula, support [-3, 3].
double bspline5(double x) {
    double acc = 0.0, binom[7] = {1, 6, 15, 20, 15, 6, 1};
    for (int k = 0; k <= 6; ++k) {
        double t = x + 3.0 - k;
        if (t > 0) acc += (k % 2 ? -1.0 : 1.0) * binom[k] * std::pow(t, 5);
    }
    return acc / 120.0;
}

cplx smooth(double x, double y) { return std::exp(-(x * x + y * y) / 8.0) * cplx(1.0 + 0.2 * x * x, 0.5 * y); }

ComplexField sample(const GridSpec& g) {
    ComplexField f(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) f(i, j) = smooth(g.x1(i), g.x2(j));
    return f;
}

} // namespace

TEST_CASE("quintic weights match the truncated-power oracle") {
    for (double t : {0.0, 0.13, 0.5, 0.77, 3.999, -1.25}) {
        auto w = quintic_weights(t);
        double base = std::floor(t);
        double sum = 0.0;
        for (int k = 0; k < 6; ++k) {
            CHECK(w[k] == doctest::Approx(bspline5(t - (base - 2 + k))).epsilon(1e-12));
            sum += w[k];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("spline interpolates the nodes and the reflections") {
    GridSpec g = make_grid(6.0, 6.0, 0.25, 0.25, Symmetry::pair);
    ComplexField f = sample(g);
    QuinticSpline s(f);
    for (int i = 0; i < g.n1; i += 3)
        for (int j = 0; j < g.n2; j += 5) {
            CHECK(std::abs(s(g.x1(i), g.x2(j)) - f(i, j)) < 1e-12);
            CHECK(std::abs(s(-g.x1(i), -g.x2(j)) - std::conj(f(i, j))) < 1e-12);
        }
    CHECK_THROWS(s(6.5, 0.0));
}

TEST_CASE("spline error between nodes decays at high order") {
    auto err = [](double h) {
        GridSpec g = make_grid(8.0, 8.0, h, h, Symmetry::pair);
        QuinticSpline s(sample(g));
        double e = 0.0;
        for (double x = -3.0; x <= 3.0; x += 0.173)
            for (double y = -3.0; y <= 3.0; y += 0.191) e = std::max(e, std::abs(s(x, y) - smooth(x, y)));
        return e;
    };
    double e1 = err(0.5), e2 = err(0.25);
    CHECK(e2 < 1e-5);
    CHECK(e1 / e2 > 20.0);
}

TEST_CASE("Richardson cancels the h^2 error term") {
    GridSpec gc = make_grid(4.0, 4.0, 0.5, 0.5, Symmetry::pair);
    GridSpec gf = make_grid(4.0, 4.0, 0.25, 0.25, Symmetry::pair);
    ComplexField c(gc), f(gf);
    auto exact = [](double x, double y) { return cplx(std::cos(x) + y * y, x * y); };
    auto e2 = [](double x, double y) { return cplx(x * x, std::sin(y)); };
    for (int i = 0; i < gc.n1; ++i)
        for (int j = 0; j < gc.n2; ++j) c(i, j) = exact(gc.x1(i), gc.x2(j)) + 0.25 * e2(gc.x1(i), gc.x2(j));
    for (int i = 0; i < gf.n1; ++i)
        for (int j = 0; j < gf.n2; ++j) f(i, j) = exact(gf.x1(i), gf.x2(j)) + 0.0625 * e2(gf.x1(i), gf.x2(j));
    ComplexField r = richardson(c, f);
    for (int i = 0; i < gc.n1; ++i)
        for (int j = 0; j < gc.n2; ++j) CHECK(std::abs(r(i, j) - exact(gc.x1(i), gc.x2(j))) < 1e-13);
    CHECK_THROWS(richardson(f, c));
}

TEST_CASE("unscaling and space-time sampling") {
    ModelParams p = make_params(Regime::pair_sch, 0.2, 0.1, 1.0);
    GridSpec g = make_grid(10.0, 10.0, 0.25, 0.25, Symmetry::pair);
    ComplexField f = sample(g);
    Unscaled U(f, p);
    CHECK(U.stretch() == doctest::Approx(1.0 / std::sqrt(1.0 - p.c * p.c)));
    CHECK(std::abs(U(1.0, 2.0) - QuinticSpline(f)(1.0, 2.0 * U.stretch())) < 1e-15);

    // the pattern translates with speed c and rotates with unit frequency in tau
    SpacetimeSample a = spacetime_field(U, 0.0, 0.0, {1.0, 0.5, 0.0});
    SpacetimeSample b = spacetime_field(U, 0.0, 0.4, {1.0, 0.5 + 0.4 * p.c, 0.0});
    CHECK(std::abs(b.psi - a.psi * std::polar(1.0, 0.4)) < 1e-12);
    SpacetimeSample c = spacetime_field(U, 0.3, 0.0, {1.0, 0.5 + 0.3 * p.omega, 0.0});
    CHECK(std::abs(c.psi - a.psi) < 1e-12);
    CHECK(a.m.m1 * a.m.m1 + a.m.m2 * a.m.m2 + a.m.m3 * a.m.m3 == doctest::Approx(1.0));
}

TEST_CASE("sample blocks") {
    ModelParams p = make_params(Regime::pair_sch, 0.2, 0.1, 1.0);
    GridSpec g = make_grid(10.0, 10.0, 0.25, 0.25, Symmetry::pair);
    Unscaled U(sample(g), p);
    SampleBlock b;
    b.center = {2.0, 0.0, 0.0};
    b.half_width = {1.0, 0.5, 0.0};
    b.ds = b.dt = b.dtau = 0.25;
    auto s = sample_block(U, b);
    CHECK(s.size() == std::size_t(3 * 3 * 9 * 5));
    CHECK(s.front().t < s.back().t);
    b.ds = 0.3;
    CHECK_THROWS(pde_residual(U, b));
    b.ds = 0.25;
    b.ntau = 1;
    CHECK_THROWS(pde_residual(U, b));
}
