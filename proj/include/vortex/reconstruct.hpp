#pragma once

#include "vortex/fields.hpp"
#include "vortex/params.hpp"
#include "vortex/stereo.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace vortex {

// C4 interpolant of the full-plane reflection of a quarter field: tensor
// quintic B-spline with interpolating coefficients and mirror boundaries.
class QuinticSpline {
public:
    explicit QuinticSpline(const ComplexField& f);

    // Throws outside [-l1, l1] x [-l2, l2].
    cplx operator()(double x1, double x2) const;

    double l1() const { return l1_; }
    double l2() const { return l2_; }
    double h() const { return std::min(h1_, h2_); }

private:
    int na_ = 0, nb_ = 0;
    double h1_ = 0.0, h2_ = 0.0, l1_ = 0.0, l2_ = 0.0;
    std::vector<cplx> coef_; // index a * nb + b
};

// Weights of the six quintic B-splines centered at floor(t) - 2 ... floor(t) + 3.
std::array<double, 6> quintic_weights(double t);

// U(s1, s2) = u(s1, s2 / sqrt(1 - c^2)).
class Unscaled {
public:
    Unscaled(const ComplexField& u, const ModelParams& params);

    cplx operator()(double s1, double s2) const { return spline_(s1, s2 * stretch_); }
    double stretch() const { return stretch_; }
    double h() const { return spline_.h(); }
    const ModelParams& params() const { return params_; }
    bool ring() const { return ring_; }

private:
    QuinticSpline spline_;
    double stretch_ = 1.0;
    ModelParams params_;
    bool ring_ = false;
};

Unscaled unscale(const ComplexField& u, const ModelParams& params);

// (4 fine - coarse) / 3 on the coarse lattice, where fine has half the step
// of coarse on the same domain. Cancels the h^2 term of the discretization
// error.
ComplexField richardson(const ComplexField& coarse, const ComplexField& fine);

struct SpacetimeSample {
    double t = 0.0;
    double tau = 0.0;
    std::array<double, 3> s{}; // only the first two entries are used for pairs
    SpherePoint m;
    cplx psi;
};

// psi = U(s1, s2 - c tau - omega t) e^{i tau} for pairs and
// U(|(s1, s2)|, s3 - c tau - omega t) e^{i tau} for rings; m = unproject(psi).
SpacetimeSample spacetime_field(const Unscaled& U, double t, double tau, const std::array<double, 3>& s);

// Sign sigma in the Schroedinger residual d_t m - sigma m x (box m + |Dm|^2 m)
// under which the traveling ansatz solves the flow.
inline constexpr double schroedinger_sigma = -1.0;

// Lattice of samples: nt x ntau times around (t0, tau0) and a box of half
// widths half_width[k] with spacing ds in space (at least one point on each
// side of the center in every direction). The spatial center is given in the
// co-moving frame, so the window follows the pattern.
struct SampleBlock {
    double t0 = 0.0, tau0 = 0.0;
    int nt = 3, ntau = 3;
    double dt = 0.1, dtau = 0.1;
    std::array<double, 3> center{}; // last used coordinate is relative to c tau0 + omega t0
    std::array<double, 3> half_width{3.0, 3.0, 3.0};
    double ds = 0.1;
};

struct ResidualNorms {
    double rms = 0.0; // discrete L2 normalized by the number of points
    double sup = 0.0;
    long points = 0;
};

// Wave-map residual box m + |Dm|^2 m, or the Schroedinger residual when the
// regime is a Schroedinger one. Central differences in every coordinate;
// residuals are taken on the interior (t, tau) slices, skipping one spatial
// cell at the window edge and two cells around each core. Throws when a
// spacing exceeds the grid step of the underlying field.
ResidualNorms pde_residual(const Unscaled& U, const SampleBlock& block);

// Every sample of the block, in (t, tau, s) lexicographic order.
std::vector<SpacetimeSample> sample_block(const Unscaled& U, const SampleBlock& block);

} // namespace vortex
