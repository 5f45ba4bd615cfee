#include "vortex/stereo.hpp"

#include <cmath>
#include <stdexcept>

namespace vortex {

SpherePoint make_sphere_point(double m1, double m2, double m3) {
    double n2 = m1 * m1 + m2 * m2 + m3 * m3;
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12)
        throw std::runtime_error("sphere point is not on the unit sphere");
    return {m1, m2, m3};
}

cplx project(const SpherePoint& m) {
    if (m.m3 <= -1.0 + south_pole_tol)
        throw std::runtime_error("stereographic projection: point at the south pole");
    return cplx(m.m1, m.m2) / (1.0 + m.m3);
}

SpherePoint unproject(cplx psi) {
    if (!std::isfinite(psi.real()) || !std::isfinite(psi.imag()))
        throw std::runtime_error("unproject: non-finite input");
    double s = std::norm(psi);
    double inv = 1.0 / (1.0 + s);
    SpherePoint m{2.0 * psi.real() * inv, 2.0 * psi.imag() * inv, (1.0 - s) * inv};
    // Renormalize so the rounding of the three quotients does not leave the sphere.
    double n = std::sqrt(m.m1 * m.m1 + m.m2 * m.m2 + m.m3 * m.m3);
    m.m1 /= n;
    m.m2 /= n;
    m.m3 /= n;
    return m;
}

cplx nonlinearity_F(cplx u) {
    double s = std::norm(u);
    return ((1.0 - s) / (1.0 + s)) * u;
}

} // namespace vortex
