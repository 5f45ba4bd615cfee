#include "vortex/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace vortex;

namespace {

cplx smooth(double x, double y) { return std::exp(-(x * x + y * y) / 10.0) * cplx(0.5 + 0.1 * x * x, 0.3 * y); }

// Continuum S with derivatives from fourth-order differences of the closed form.
cplx continuum_S(double x, double y, const OpCoefficients& k, bool ring) {
    const double e = 1e-3;
    auto d = [&](double dx, double dy) {
        return (-smooth(x + 2 * dx, y + 2 * dy) + 8.0 * smooth(x + dx, y + dy) - 8.0 * smooth(x - dx, y - dy)
                + smooth(x - 2 * dx, y - 2 * dy)) / (12.0 * e);
    };
    auto dd = [&](double dx, double dy) {
        return (-smooth(x + 2 * dx, y + 2 * dy) + 16.0 * smooth(x + dx, y + dy) - 30.0 * smooth(x, y)
                + 16.0 * smooth(x - dx, y - dy) - smooth(x - 2 * dx, y - 2 * dy)) / (12.0 * e * e);
    };
    cplx u = smooth(x, y), a = d(e, 0), b = d(0, e), lap = dd(e, 0) + dd(0, e);
    double s = std::norm(u), q = 1.0 + s, g = (1.0 - s) / q;
    const cplx I(0, 1);
    cplx out = lap - 2.0 / q * std::conj(u) * (a * a + b * b) + g * u + k.q2 * g * I * b - k.t2 * I * b;
    if (ring) out += a / x;
    return out;
}

double max_error(double h, OpTag tag, const ModelParams& p) {
    Symmetry sym = (tag == OpTag::S3 || tag == OpTag::S4) ? Symmetry::ring : Symmetry::pair;
    GridSpec g = make_grid(8.0, 8.0, h, h, sym);
    ComplexField u(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) u(i, j) = smooth(g.x1(i), g.x2(j));
    ComplexField S = apply_S(u, tag, p);
    OpCoefficients k = op_coefficients(tag, p);
    double err = 0.0;
    for (int i = 0; i + 1 < g.n1; ++i)
        for (int j = 0; j + 1 < g.n2; ++j) {
            double x = g.x1(i), y = g.x2(j);
            if (x < 1.0 || x > 5.0 || y > 5.0) continue;
            err = std::max(err, std::abs(S(i, j) - continuum_S(x, y, k, sym == Symmetry::ring)));
        }
    return err;
}

} // namespace

TEST_CASE("apply_S is a second-order discretization") {
    ModelParams pair = make_params(Regime::pair_sch, 0.1, 0.3, 1.0);
    ModelParams ring = make_params(Regime::ring_sch, 0.1, 0.3, 1.0);
    for (auto [tag, p] : {std::pair{OpTag::S0, pair}, {OpTag::S2, pair}, {OpTag::S4, ring}}) {
        double e1 = max_error(0.2, tag, p), e2 = max_error(0.1, tag, p);
        CAPTURE(tag_name(tag));
        CHECK(e2 < 5e-3);
        CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));
    }
}

TEST_CASE("constant unit field is an exact solution for every tag") {
    ModelParams pair = make_params(Regime::pair_sch, 0.1, 0.3, 1.0);
    ModelParams ring = make_params(Regime::ring_sch, 0.1, 0.3, 1.0);
    GridSpec gp = make_grid(4.0, 4.0, 0.5, 0.5, Symmetry::pair);
    GridSpec gr = make_grid(4.0, 4.0, 0.5, 0.5, Symmetry::ring);
    for (OpTag t : {OpTag::S0, OpTag::S1, OpTag::S2})
        for (cplx z : apply_S(ComplexField(gp, 1.0), t, pair).data) CHECK(std::abs(z) < 1e-14);
    for (OpTag t : {OpTag::S3, OpTag::S4})
        for (cplx z : apply_S(ComplexField(gr, 1.0), t, ring).data) CHECK(std::abs(z) < 1e-14);
}

TEST_CASE("apply_S preserves the conjugation parity") {
    // u real on the axis gives S real on the axis
    ModelParams p = make_params(Regime::pair_sch, 0.1, 0.3, 1.0);
    GridSpec g = make_grid(4.0, 4.0, 0.25, 0.25, Symmetry::pair);
    ComplexField u(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) u(i, j) = smooth(g.x1(i), g.x2(j));
    ComplexField S = apply_S(u, OpTag::S2, p);
    for (int i = 0; i < g.n1; ++i) CHECK(std::abs(S(i, 0).imag()) < 1e-13);
}

TEST_CASE("linearize_apply is linear in the direction") {
    ModelParams p = make_params(Regime::pair_wm, 0.1, 0.0, 1.0);
    GridSpec g = make_grid(4.0, 4.0, 0.25, 0.25, Symmetry::pair);
    ComplexField u(g), v(g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            u(i, j) = smooth(g.x1(i), g.x2(j));
            v(i, j) = cplx(U(rng), j == 0 ? 0.0 : U(rng));
        }
    ComplexField a = linearize_apply(u, v, OpTag::S1, p);
    ComplexField v2 = v;
    for (cplx& z : v2.data) z *= 3.0;
    ComplexField b = linearize_apply(u, v2, OpTag::S1, p);
    for (std::size_t k = 0; k < a.data.size(); ++k) CHECK(std::abs(b.data[k] - 3.0 * a.data[k]) < 1e-5 * (1.0 + std::abs(b.data[k])));
    CHECK_THROWS(linearize_apply(u, ComplexField(g), OpTag::S1, p));
}

TEST_CASE("apply_S0_lattice agrees with the symmetric-grid S0") {
    ModelParams p = make_params(Regime::pair_wm, 0.1, 0.0, 1.0);
    const double h = 0.25;
    GridSpec g = make_grid(4.0, 4.0, h, h, Symmetry::pair);
    ComplexField u(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) u(i, j) = smooth(g.x1(i), g.x2(j));
    ComplexField S = apply_S(u, OpTag::S0, p);

    // full lattice over [-4, 4]^2 with node (n-1, n-1) at the origin
    int m = g.n1, n = 2 * m - 1;
    std::vector<cplx> w(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) w[static_cast<std::size_t>(a) * n + b] = smooth((a - m + 1) * h, (b - m + 1) * h);
    std::vector<cplx> L = apply_S0_lattice(w, n, n, h, h);
    double err = 0.0;
    for (int i = 0; i + 1 < g.n1; ++i)
        for (int j = 0; j + 1 < g.n2; ++j)
            err = std::max(err, std::abs(L[static_cast<std::size_t>(i + m - 1) * n + (j + m - 1)] - S(i, j)));
    CHECK(err < 1e-13);
    for (int a = 0; a < n; ++a) {
        CHECK(L[static_cast<std::size_t>(a) * n] == cplx(0.0));
        CHECK(L[static_cast<std::size_t>(a) * n + n - 1] == cplx(0.0));
    }
}
