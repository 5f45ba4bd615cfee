#pragma once

#include "vortex/fields.hpp"
#include "vortex/operators.hpp"
#include "vortex/params.hpp"
#include "vortex/profile.hpp"

#include <memory>

namespace vortex {

struct VortexGeometry {
    double ell = 0.0;
    double theta = 0.0; // in (-pi, pi], cut along the negative x1-ray from the center
    Point grad_ell{};
    Point grad_theta{};
};

VortexGeometry vortex_geometry(Point center, Point point);

// w+(z - e1) * w-(z - e2), e1 = (d, 0), e2 = (-d, 0), w+- = rho(ell) e^{+-i theta}.
ComplexField build_pair(const ModelParams& params, const GridSpec& spec, const VortexProfile& profile);

struct RingPhase {
    ScalarField phi_s;
    ScalarField phi_r;
};

// Factorizes [Delta + H1] on the quarter grid once (odd in x2, even in x1,
// zero on the outer boundary) so that phases for several d share it.
class RingPhaseSolver {
public:
    explicit RingPhaseSolver(const GridSpec& spec);
    ~RingPhaseSolver();
    RingPhaseSolver(RingPhaseSolver&&) noexcept;
    RingPhaseSolver& operator=(RingPhaseSolver&&) noexcept;

    RingPhase solve(const ModelParams& params) const;
    const GridSpec& spec() const { return spec_; }

private:
    struct Impl;
    GridSpec spec_;
    std::unique_ptr<Impl> impl_;
};

RingPhase build_ring_phase(const ModelParams& params, const GridSpec& spec);

// Right-hand side -[Delta + H1](theta_e1 - theta_e2 + phi_s) of the phi_r
// problem, evaluated in closed form at (x1, x2).
double ring_phase_source(const ModelParams& params, double x1, double x2);

// Radial cutoff of phi_s: 1 on [0, d/10], 0 beyond d/5, smooth in between.
double ring_cutoff(double r, double d);

ComplexField build_ring(const ModelParams& params, const GridSpec& spec, const VortexProfile& profile,
                        const RingPhase& phases);

// Builds the regime's ansatz (pair, or ring with its phase).
ComplexField build_ansatz(const ModelParams& params, const GridSpec& spec, const VortexProfile& profile,
                          const RingPhaseSolver* ring_solver = nullptr);

inline constexpr double cokernel_radius = 6.0;

// Cubic smoothstep: 1 on [0, 1], 0 on [2, inf).
double cutoff_eta(double t);

// Z_d = dV_d/dd * [eta(|z - e1|/R) + eta(|z - e2|/R)], dV_d/dd by central
// differences with step 1e-3 d. V_d supplies the grid.
ComplexField kernel_Zd(const ModelParams& params, const VortexProfile& profile, const ComplexField& V_d,
                       const RingPhaseSolver* ring_solver = nullptr);

struct ErrorField {
    ComplexField field;     // -S[V]/(iV) where |V| >= 0.1, S[V] inside cores
    double norm_star2 = 0;  // the ** norm
    double inner = 0;       // core part: sup |S[V]| (pair) or L^14 (ring)
    double outer_re = 0;    // weighted sup of the real part
    double outer_im = 0;    // weighted sup of the imaginary part
};

inline constexpr double weight_rho = 0.5;

ErrorField error_field(const ComplexField& V, OpTag tag, const ModelParams& params);

} // namespace vortex
