#pragma once

#include <complex>

namespace vortex {

using cplx = std::complex<double>;

struct SpherePoint {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 1.0;
};

// Validating constructor: rejects points further than 1e-12 from the unit sphere.
SpherePoint make_sphere_point(double m1, double m2, double m3);

// psi = (m1 + i m2) / (1 + m3). Throws near the south pole.
cplx project(const SpherePoint& m);

// Inverse stereographic projection.
SpherePoint unproject(cplx psi);

// F(u) = (1 - |u|^2) / (1 + |u|^2) * u
cplx nonlinearity_F(cplx u);

inline constexpr double south_pole_tol = 1e-12;

} // namespace vortex
