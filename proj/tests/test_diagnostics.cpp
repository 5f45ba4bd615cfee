#include "vortex/diagnostics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vortex;

namespace {

std::vector<cplx> circle(int n, int q, double r = 1.0) {
    std::vector<cplx> out;
    for (int k = 0; k < n; ++k) out.push_back(std::pow(std::polar(r, 2.0 * std::numbers::pi * k / n), q));
    return out;
}

ComplexField sample(const GridSpec& g, cplx (*f)(double, double)) {
    ComplexField u(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) u(i, j) = f(g.x1(i), g.x2(j));
    return u;
}

} // namespace

TEST_CASE("winding of sampled loops") {
    CHECK(winding_number(circle(16, 1)) == 1);
    CHECK(winding_number(circle(16, -1)) == -1);
    CHECK(winding_number(circle(32, 3)) == 3);
    CHECK(winding_number(std::vector<cplx>(5, cplx(2.0, 1.0))) == 0);
    auto zero = circle(8, 1);
    zero[3] = 0.0;
    CHECK_THROWS(winding_number(zero));
    CHECK_THROWS(winding_number(circle(4, 2))); // jumps of exactly pi
}

TEST_CASE("rectangle windings of a vortex pair field") {
    // (z - 3)/(z + 3) is even in x1 only after conjugation, so build the
    // quarter field from the product form used by the ansatz
    GridSpec g = make_grid(8.0, 8.0, 0.25, 0.25, Symmetry::pair);
    ComplexField u = sample(g, [](double x, double y) {
        cplx z(x, y);
        return (z - 3.0) * std::conj(z + 3.0) / (1.0 + std::norm(z - 3.0) + std::norm(z + 3.0));
    });
    // around e1 only
    CHECK(winding_number(u, {8, -4, 16, 4}) == 1);
    // around e2 only
    CHECK(winding_number(u, {-16, -4, -8, 4}) == -1);
    // around both
    CHECK(winding_number(u, {-20, -8, 20, 8}) == 0);
    CHECK(full_value(u, -3, 2) == u(3, 2));
    CHECK(full_value(u, 3, -2) == std::conj(u(3, 2)));

    auto vs = detect_vortices(u);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].charge == 1);
    CHECK(vs[0].position[0] == doctest::Approx(3.0).epsilon(0.1));
    CHECK(total_winding(u) == 0);
}

TEST_CASE("energy and charge of the degree-one harmonic map") {
    SphereGrid m = sample_sphere([](double x, double y) { return cplx(x, y); }, -20.0, -20.0, 201, 201, 0.2, 0.2);
    EnergyCharge ec = energy_charge(m);
    // truncated to the square of half width 20 the exact values are within a few percent
    CHECK(ec.energy == doctest::Approx(8.0 * std::numbers::pi).epsilon(0.04));
    CHECK(std::abs(ec.charge) == doctest::Approx(1.0).epsilon(0.04));
    CHECK(ec.energy - 8.0 * std::numbers::pi * std::abs(ec.charge) >= -0.05 * ec.energy);

    SphereGrid a = sample_sphere([](double x, double y) { return cplx(x, -y); }, -20.0, -20.0, 201, 201, 0.2, 0.2);
    EnergyCharge ea = energy_charge(a);
    CHECK(ea.charge == doctest::Approx(-ec.charge).epsilon(1e-12));
    CHECK(ea.energy == doctest::Approx(ec.energy).epsilon(1e-12));
}

TEST_CASE("constant maps carry no energy") {
    SphereGrid m = sample_sphere([](double, double) { return cplx(0.3, 0.4); }, 0.0, 0.0, 20, 20, 0.5, 0.5);
    EnergyCharge ec = energy_charge(m);
    CHECK(ec.energy == doctest::Approx(0.0));
    CHECK(ec.charge == doctest::Approx(0.0));
}

TEST_CASE("energy_charge rejects points off the sphere") {
    SphereGrid m = sample_sphere([](double, double) { return cplx(0.0); }, 0.0, 0.0, 5, 5, 0.5, 0.5);
    m.m[7].m3 = 1.1;
    CHECK_THROWS(energy_charge(m));
}
