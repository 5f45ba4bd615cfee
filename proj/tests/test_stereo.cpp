#include "vortex/stereo.hpp"

#include <doctest.h>

#include <cmath>

using namespace vortex;

TEST_CASE("project and unproject are inverse charts") {
    for (cplx psi : {cplx(0, 0), cplx(0.3, -0.7), cplx(2.5, 1.0), cplx(-40.0, 3.0)}) {
        SpherePoint m = unproject(psi);
        CHECK(m.m1 * m.m1 + m.m2 * m.m2 + m.m3 * m.m3 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(project(m) - psi) <= 1e-12 * (1.0 + std::abs(psi)));
    }
}

TEST_CASE("unproject maps the origin to the north pole and the unit circle to the equator") {
    SpherePoint n = unproject(0.0);
    CHECK(n.m3 == 1.0);
    SpherePoint e = unproject(std::polar(1.0, 0.8));
    CHECK(std::abs(e.m3) < 1e-15);
    CHECK(e.m1 == doctest::Approx(std::cos(0.8)));
    CHECK(e.m2 == doctest::Approx(std::sin(0.8)));
}

TEST_CASE("sphere points are validated") {
    CHECK_THROWS_AS(make_sphere_point(1.0, 0.0, 1e-6), std::runtime_error);
    CHECK_NOTHROW(make_sphere_point(0.6, 0.8, 0.0));
    CHECK_THROWS_AS(project(SpherePoint{0.0, 0.0, -1.0}), std::runtime_error);
}

TEST_CASE("nonlinearity F") {
    CHECK(std::abs(nonlinearity_F(2.0) - cplx(-1.2, 0.0)) < 1e-15);
    CHECK(std::abs(nonlinearity_F(std::polar(1.0, 0.3))) < 1e-15);
    cplx u(0.4, -0.2);
    double q = std::norm(u);
    CHECK(std::abs(nonlinearity_F(u) - (1.0 - q) / (1.0 + q) * u) < 1e-15);
}
