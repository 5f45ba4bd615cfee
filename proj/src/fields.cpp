#include "vortex/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vortex {

GridSpec make_grid(double l1, double l2, double h1, double h2, Symmetry symmetry) {
    if (!(h1 > 0.0 && h2 > 0.0 && h1 <= 0.5 && h2 <= 0.5))
        throw std::runtime_error("make_grid: spacings must lie in (0, 0.5]");
    if (!(l1 > 0.0 && l2 > 0.0)) throw std::runtime_error("make_grid: extents must be positive");
    GridSpec g;
    g.h1 = h1;
    g.h2 = h2;
    g.symmetry = symmetry;
    g.n1 = static_cast<int>(std::ceil(l1 / h1 - 1e-9)) + 1;
    g.n2 = static_cast<int>(std::ceil(l2 / h2 - 1e-9)) + 1;
    if (g.n1 < 4 || g.n2 < 4) throw std::runtime_error("make_grid: at least 4 points per direction");
    g.l1 = (g.n1 - 1) * h1;
    g.l2 = (g.n2 - 1) * h2;
    return g;
}

cplx ghost_value(const ComplexField& f, int i, int j) {
    if (i < 0) i = -i;
    if (j < 0) return std::conj(f(i, -j));
    return f(i, j);
}

double ghost_value(const ScalarField& f, int i, int j, Parity x2_parity) {
    if (i < 0) i = -i;
    if (j < 0) return x2_parity == Parity::odd ? -f(i, -j) : f(i, -j);
    return f(i, j);
}

namespace {

template <class T>
T bilinear(const Field<T>& f, double x1, double x2) {
    const GridSpec& g = f.spec;
    double s = x1 / g.h1, t = x2 / g.h2;
    int i = std::min(static_cast<int>(s), g.n1 - 2);
    int j = std::min(static_cast<int>(t), g.n2 - 2);
    double a = s - i, b = t - j;
    if (a == 0.0 && b == 0.0) return f(i, j);
    return (1.0 - a) * (1.0 - b) * f(i, j) + a * (1.0 - b) * f(i + 1, j) + (1.0 - a) * b * f(i, j + 1) +
           a * b * f(i + 1, j + 1);
}

void check_domain(const GridSpec& g, double x1, double x2) {
    double tol = 1e-12 * (g.l1 + g.l2);
    if (!(std::abs(x1) <= g.l1 + tol && std::abs(x2) <= g.l2 + tol))
        throw std::runtime_error("reflect_full: point outside the domain");
}

} // namespace

cplx reflect_full(const ComplexField& f, double x1, double x2) {
    check_domain(f.spec, x1, x2);
    double a1 = std::min(std::abs(x1), f.spec.l1), a2 = std::min(std::abs(x2), f.spec.l2);
    cplx v = bilinear(f, a1, a2);
    return x2 < 0.0 ? std::conj(v) : v;
}

double reflect_full(const ScalarField& f, double x1, double x2, Parity x2_parity) {
    check_domain(f.spec, x1, x2);
    double a1 = std::min(std::abs(x1), f.spec.l1), a2 = std::min(std::abs(x2), f.spec.l2);
    double v = bilinear(f, a1, a2);
    return (x2 < 0.0 && x2_parity == Parity::odd) ? -v : v;
}

namespace {

template <class T, class Ghost>
Derivatives<T> diff_impl(const Field<T>& f, Ghost ghost) {
    const GridSpec& g = f.spec;
    Derivatives<T> out{Field<T>(g), Field<T>(g), Field<T>(g)};
    double i2h1 = 0.5 / g.h1, i2h2 = 0.5 / g.h2, ih1s = 1.0 / (g.h1 * g.h1), ih2s = 1.0 / (g.h2 * g.h2);
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 0; j + 1 < g.n2; ++j) {
            T c = f(i, j);
            T e = f(i + 1, j), w = ghost(i - 1, j);
            T n = f(i, j + 1), s = ghost(i, j - 1);
            out.d1(i, j) = (e - w) * i2h1;
            out.d2(i, j) = (n - s) * i2h2;
            out.laplacian(i, j) = (e - 2.0 * c + w) * ih1s + (n - 2.0 * c + s) * ih2s;
        }
    }
    return out;
}

template <class T, class Abs>
double norm_impl(const Field<T>& f, double p, const NormWeight* weight, const Region& region, Abs absval) {
    const GridSpec& g = f.spec;
    bool sup = std::isinf(p);
    if (!sup && p != 2.0 && p != 14.0) throw std::runtime_error("discrete_norm: unsupported exponent");
    if (weight && !sup) throw std::runtime_error("discrete_norm: weights apply to the sup norm only");
    double acc = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double x1 = g.x1(i), x2 = g.x2(j);
            if (region && !region(x1, x2)) continue;
            double v = absval(f(i, j));
            if (weight) {
                double ell = std::numeric_limits<double>::infinity();
                for (const auto& c : weight->centers) ell = std::min(ell, std::hypot(x1 - c[0], x2 - c[1]));
                if (!(ell > weight->ell_min && ell < weight->ell_max)) continue;
                v *= std::pow(ell, weight->power);
            }
            if (sup)
                acc = std::max(acc, v);
            else
                acc += trapezoid_weight(g, i, j) * std::pow(v, p);
        }
    }
    if (sup) return acc;
    return std::pow(acc * g.h1 * g.h2, 1.0 / p);
}

} // namespace

Derivatives<cplx> diff_ops(const ComplexField& f) {
    return diff_impl(f, [&](int i, int j) { return ghost_value(f, i, j); });
}

Derivatives<double> diff_ops(const ScalarField& f, Parity x2_parity) {
    return diff_impl(f, [&](int i, int j) { return ghost_value(f, i, j, x2_parity); });
}

double trapezoid_weight(const GridSpec& g, int i, int j) {
    double w = 1.0;
    if (i == 0 || i == g.n1 - 1) w *= 0.5;
    if (j == 0 || j == g.n2 - 1) w *= 0.5;
    return w;
}

double discrete_norm(const ComplexField& f, double p, const NormWeight* weight, const Region& region) {
    return norm_impl(f, p, weight, region, [](cplx v) { return std::abs(v); });
}

double discrete_norm(const ScalarField& f, double p, const NormWeight* weight, const Region& region) {
    return norm_impl(f, p, weight, region, [](double v) { return std::abs(v); });
}

double divided_difference_sup(const ComplexField& f, int order, const Region& region) {
    if (order != 1 && order != 2) throw std::runtime_error("divided_difference_sup: order must be 1 or 2");
    const GridSpec& g = f.spec;
    double best = 0.0;
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 0; j + 1 < g.n2; ++j) {
            if (region && !region(g.x1(i), g.x2(j))) continue;
            cplx c = f(i, j), e = f(i + 1, j), n = f(i, j + 1);
            if (order == 1) {
                best = std::max({best, std::abs(e - c) / g.h1, std::abs(n - c) / g.h2});
            } else {
                cplx w = ghost_value(f, i - 1, j), s = ghost_value(f, i, j - 1);
                cplx ne = f(i + 1, j + 1);
                best = std::max({best, std::abs(e - 2.0 * c + w) / (g.h1 * g.h1),
                                 std::abs(n - 2.0 * c + s) / (g.h2 * g.h2),
                                 std::abs(ne - e - n + c) / (g.h1 * g.h2)});
            }
        }
    }
    return best;
}

} // namespace vortex
