#include "vortex/fields.hpp"

#include <doctest.h>

#include <cmath>

using namespace vortex;

TEST_CASE("make_grid rounds extents up to whole cells") {
    GridSpec g = make_grid(10.1, 6.0, 0.5, 0.25, Symmetry::pair);
    CHECK(g.n1 == 22);
    CHECK(g.l1 == doctest::Approx(10.5));
    CHECK(g.n2 == 25);
    CHECK(g.l2 == doctest::Approx(6.0));
    CHECK(g.x1(g.n1 - 1) == doctest::Approx(g.l1));
    CHECK_THROWS(make_grid(10.0, 10.0, 0.6, 0.5, Symmetry::pair));
    CHECK_THROWS(make_grid(10.0, 10.0, 0.0, 0.5, Symmetry::pair));
    CHECK_THROWS(make_grid(1.0, 10.0, 0.5, 0.5, Symmetry::pair));
}

TEST_CASE("ghost values follow the parity table") {
    GridSpec g = make_grid(4.0, 4.0, 0.5, 0.5, Symmetry::pair);
    ComplexField f(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) f(i, j) = cplx(1.0 + i + 0.1 * j, j == 0 ? 0.0 : 0.3 * i * j + j);
    CHECK(ghost_value(f, -1, 3) == f(1, 3));
    CHECK(ghost_value(f, 2, -1) == std::conj(f(2, 1)));
    CHECK(ghost_value(f, -1, -1) == std::conj(f(1, 1)));

    ScalarField s(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) s(i, j) = i + 10.0 * j;
    CHECK(ghost_value(s, 3, -1, Parity::even) == s(3, 1));
    CHECK(ghost_value(s, 3, -1, Parity::odd) == -s(3, 1));
}

TEST_CASE("full-plane reflection is even in x1 and conjugate in x2") {
    GridSpec g = make_grid(5.0, 5.0, 0.25, 0.25, Symmetry::pair);
    ComplexField f(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            double x = g.x1(i), y = g.x2(j);
            f(i, j) = cplx(std::cos(x) * std::cos(y), x * x * std::sin(y));
        }
    for (auto [x, y] : {std::pair{1.3, 0.7}, {4.1, 2.2}, {0.05, 3.3}}) {
        cplx v = reflect_full(f, x, y);
        CHECK(std::abs(reflect_full(f, -x, y) - v) < 1e-14);
        CHECK(std::abs(reflect_full(f, x, -y) - std::conj(v)) < 1e-14);
        CHECK(std::abs(reflect_full(f, -x, -y) - std::conj(v)) < 1e-14);
    }
    CHECK(std::abs(reflect_full(f, 0.5, 0.75) - f(2, 3)) < 1e-15);
    CHECK_THROWS(reflect_full(f, 5.5, 0.0));
}

TEST_CASE("central differences are exact on quadratics") {
    GridSpec g = make_grid(4.0, 3.0, 0.25, 0.5, Symmetry::pair);
    ComplexField f(g);
    // even in x1, real part even and imaginary part odd in x2
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            double x = g.x1(i), y = g.x2(j);
            f(i, j) = cplx(x * x + 2.0 * y * y, 3.0 * y * x * x);
        }
    auto d = diff_ops(f);
    for (int i = 0; i + 1 < g.n1; ++i)
        for (int j = 0; j + 1 < g.n2; ++j) {
            double x = g.x1(i), y = g.x2(j);
            CHECK(std::abs(d.d1(i, j) - cplx(2.0 * x, 6.0 * x * y)) < 1e-12);
            CHECK(std::abs(d.d2(i, j) - cplx(4.0 * y, 3.0 * x * x)) < 1e-12);
            CHECK(std::abs(d.laplacian(i, j) - cplx(6.0, 6.0 * y)) < 1e-11);
        }
    CHECK(d.laplacian(g.n1 - 1, 2) == cplx(0.0));
}

TEST_CASE("discrete norms") {
    GridSpec g = make_grid(6.0, 4.0, 0.5, 0.5, Symmetry::pair);
    ComplexField one(g, cplx(1.0));
    CHECK(discrete_norm(one, 2.0) == doctest::Approx(std::sqrt(g.l1 * g.l2)));
    CHECK(discrete_norm(one, 14.0) == doctest::Approx(std::pow(g.l1 * g.l2, 1.0 / 14.0)));
    ComplexField f(g);
    f(3, 2) = cplx(0.0, -2.5);
    CHECK(discrete_norm(f, inf_norm) == 2.5);

    // weighted sup of ell^2 |f| for f = 1 over 1 < ell < 3 around the origin
    NormWeight w{{{0.0, 0.0}}, 2.0, 1.0, 3.0};
    double expect = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            double l = std::hypot(g.x1(i), g.x2(j));
            if (l > 1.0 && l < 3.0) expect = std::max(expect, l * l);
        }
    CHECK(discrete_norm(one, inf_norm, &w) == doctest::Approx(expect));
    CHECK_THROWS(discrete_norm(one, 2.0, &w));

    // a region restricts the nodes
    auto left = [](double x, double) { return x < 1.0; };
    CHECK(discrete_norm(f, inf_norm, nullptr, left) == 0.0);
}

TEST_CASE("divided differences of a linear field") {
    GridSpec g = make_grid(4.0, 4.0, 0.25, 0.25, Symmetry::pair);
    ComplexField f(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) f(i, j) = cplx(3.0 * g.x1(i) * g.x1(i), 0.0);
    CHECK(divided_difference_sup(f, 2) == doctest::Approx(6.0));
    CHECK_THROWS(divided_difference_sup(f, 3));
}

TEST_CASE("trapezoid weights integrate constants exactly") {
    GridSpec g = make_grid(3.0, 2.0, 0.5, 0.25, Symmetry::pair);
    double acc = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) acc += trapezoid_weight(g, i, j);
    CHECK(acc * g.h1 * g.h2 == doctest::Approx(g.l1 * g.l2));
}
