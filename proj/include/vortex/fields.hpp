#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace vortex {

using cplx = std::complex<double>;

enum class Symmetry : unsigned { pair = 0, ring = 1 };

// Quarter-domain lattice x1 = i*h1, x2 = j*h2 with i < n1, j < n2. The last
// row and column (x1 = l1, x2 = l2) are the outer boundary layer.
struct GridSpec {
    double l1 = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    Symmetry symmetry = Symmetry::pair;
    int n1 = 0;
    int n2 = 0;

    double x1(int i) const { return i * h1; }
    double x2(int j) const { return j * h2; }
    std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n2 + j; }
    bool operator==(const GridSpec&) const = default;
};

// Rounds the extents up to whole cells; l1, l2 of the result are (n-1)*h.
GridSpec make_grid(double l1, double l2, double h1, double h2, Symmetry symmetry);

template <class T>
struct Field {
    GridSpec spec;
    std::vector<T> data;

    Field() = default;
    explicit Field(const GridSpec& g, T value = T{}) : spec(g), data(g.size(), value) {}

    T& operator()(int i, int j) { return data[spec.index(i, j)]; }
    const T& operator()(int i, int j) const { return data[spec.index(i, j)]; }
};

using ComplexField = Field<cplx>;
using ScalarField = Field<double>;

// Parity of a real field under x2 -> -x2. Complex fields always use
// u(x1, -x2) = conj u(x1, x2); every field is even in x1.
enum class Parity { even, odd };

// Lattice value with ghost indices i = -1 or j = -1 resolved by the parity table.
cplx ghost_value(const ComplexField& f, int i, int j);
double ghost_value(const ScalarField& f, int i, int j, Parity x2_parity);

// Full-plane value at (x1, x2): bilinear interpolation on the quarter grid plus
// the parity table. Throws outside [-l1, l1] x [-l2, l2].
cplx reflect_full(const ComplexField& f, double x1, double x2);
double reflect_full(const ScalarField& f, double x1, double x2, Parity x2_parity);

template <class T>
struct Derivatives {
    Field<T> d1;
    Field<T> d2;
    Field<T> laplacian;
};

// Central differences on every node except the outer boundary layer, which is
// left at zero. Axis rows use ghost values from the parity table.
Derivatives<cplx> diff_ops(const ComplexField& f);
Derivatives<double> diff_ops(const ScalarField& f, Parity x2_parity);

using Point = std::array<double, 2>;
using Region = std::function<bool(double, double)>;

// Distance weight ell^power, ell = distance to the nearest listed center,
// restricted to ell_min < ell < ell_max.
struct NormWeight {
    std::vector<Point> centers;
    double power = 0.0;
    double ell_min = 0.0;
    double ell_max = std::numeric_limits<double>::infinity();
};

inline constexpr double inf_norm = std::numeric_limits<double>::infinity();

// Trapezoidal L^p (p = 2 or 14) over the stored domain, or the sup norm for
// p = inf. With a weight, only p = inf is accepted and the result is the
// weighted sup over the weight's annulus. An optional region restricts the
// nodes further.
double discrete_norm(const ComplexField& f, double p, const NormWeight* weight = nullptr,
                     const Region& region = {});
double discrete_norm(const ScalarField& f, double p, const NormWeight* weight = nullptr,
                     const Region& region = {});

// Sup of first (order 1) or second (order 2) divided differences over nodes in
// the region, interior stencils only. Stand-in for Hoelder seminorms.
double divided_difference_sup(const ComplexField& f, int order, const Region& region = {});

// Trapezoid weight of node (i, j) on the quarter domain, without h1*h2.
double trapezoid_weight(const GridSpec& g, int i, int j);

} // namespace vortex
