#pragma once

#include "vortex/fields.hpp"
#include "vortex/operators.hpp"
#include "vortex/params.hpp"
#include "vortex/stereo.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace vortex {

// Value of the full-plane extension at signed lattice indices
// |i| < n1, |j| < n2 (even in x1, conjugate in x2).
cplx full_value(const ComplexField& f, int i, int j);

// Winding of a closed loop of samples (the last sample connects back to the
// first). Throws on a zero sample or a phase jump of pi between neighbours.
int winding_number(const std::vector<cplx>& loop);

// Boundary of the rectangle [i0, i1] x [j0, j1] in signed full-plane indices,
// traversed counterclockwise.
struct LatticeRect {
    int i0 = 0, j0 = 0, i1 = 0, j1 = 0;
};

int winding_number(const ComplexField& f, const LatticeRect& rect);

struct Vortex {
    Point position{};
    int charge = 0;
};

// Plaquette winding sweep over the full-plane extension. Returns the clusters
// whose centroid lies on the stored quarter (x1 >= 0, x2 >= 0).
std::vector<Vortex> detect_vortices(const ComplexField& f);

// Sum of all plaquette windings over the full-plane extension, which equals
// the winding along its outer boundary.
int total_winding(const ComplexField& f);

// Sphere-valued samples on the rectangle x = x0 + i h1, y = y0 + j h2.
struct SphereGrid {
    int n1 = 0, n2 = 0;
    double h1 = 0.0, h2 = 0.0;
    double x0 = 0.0, y0 = 0.0;
    std::vector<SpherePoint> m; // index i * n2 + j

    const SpherePoint& operator()(int i, int j) const { return m[static_cast<std::size_t>(i) * n2 + j]; }
};

// unproject(psi(x, y)) on the given rectangle.
SphereGrid sample_sphere(const std::function<cplx(double, double)>& psi, double x0, double y0, int n1, int n2,
                         double h1, double h2);

// Full-plane reflection of a quarter field, mapped to the sphere.
SphereGrid sphere_grid(const ComplexField& u);

struct EnergyCharge {
    double energy = 0.0;
    double charge = 0.0;
};

// E = int |d1 m|^2 + |d2 m|^2 and Q = (1/4pi) int m . (d1 m x d2 m), central
// differences on interior nodes. Throws on samples off the sphere by 1e-6.
EnergyCharge energy_charge(const SphereGrid& m);

// Discrete surrogate of the corrector norm. psi = -i(u/V - 1) away from the
// cores, phi = u - V inside. Keys: inner, psi1, grad_psi1, psi2, grad_psi2
// and star (their sum). Distances are to the nearer core; the two cores
// contribute equally by symmetry. The weighted sups skip a strip of width
// dirichlet_margin along the outer boundary.
inline constexpr double dirichlet_margin = 5.0;

std::map<std::string, double> corrector_norms(const ComplexField& u, const ComplexField& V, const ModelParams& params);

struct DiagnosticsReport {
    double energy = 0.0;
    double charge = 0.0;
    std::vector<Vortex> vortices;
    int total_winding = 0;
    double bogomolny_margin = 0.0; // E - 8 pi |Q|
    std::map<std::string, double> weighted_norms;
    std::map<std::string, double> residuals;
};

// V may be null, in which case no corrector norms are reported.
DiagnosticsReport diagnose(const ComplexField& u, const ModelParams& params, OpTag tag,
                           const ComplexField* V = nullptr);

} // namespace vortex
