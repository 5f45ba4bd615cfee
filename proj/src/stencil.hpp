#pragma once

#include "vortex/fields.hpp"
#include "vortex/operators.hpp"

namespace vortex::detail {

inline cplx times_i(cplx z) { return {-z.imag(), z.real()}; }

// Five-point neighbourhood of node (i, j) with ghosts resolved.
struct Stencil {
    cplx c, e, w, n, s;
};

inline Stencil gather(const ComplexField& u, int i, int j) {
    return {u(i, j), u(i + 1, j), ghost_value(u, i - 1, j), u(i, j + 1), ghost_value(u, i, j - 1)};
}

inline cplx node_S(const Stencil& st, double h1, double h2, double x1, bool axis, const OpCoefficients& k) {
    cplx a = (st.e - st.w) * (0.5 / h1);
    cplx b = (st.n - st.s) * (0.5 / h2);
    cplx lap = (st.e - 2.0 * st.c + st.w) / (h1 * h1) + (st.n - 2.0 * st.c + st.s) / (h2 * h2);
    double s = std::norm(st.c);
    double q = 1.0 + s;
    double g = (1.0 - s) / q;
    cplx out = lap - (2.0 / q) * std::conj(st.c) * (a * a + b * b) + g * st.c;
    if (k.q2 != 0.0) out += (k.q2 * g) * times_i(b);
    if (k.t2 != 0.0) out -= k.t2 * times_i(b);
    if (k.h1) out += axis ? (2.0 / (h1 * h1)) * (st.e - st.c) : a / x1;
    return out;
}

} // namespace vortex::detail
