#pragma once

#include "vortex/ansatz.hpp"
#include "vortex/fields.hpp"
#include "vortex/operators.hpp"
#include "vortex/params.hpp"
#include "vortex/profile.hpp"

#include <vector>

namespace vortex {

struct SolverOptions {
    int newton_max = 50;
    double newton_tol = 1e-8;
    double krylov_tol = 1e-10;
    int krylov_restart = 40;
    int krylov_max = 400;
};

struct SolveResult {
    ComplexField u;
    double c_mult = 0.0;
    int newton_iters = 0;
    double final_residual = 0.0;
    double corrector_norm_star = 0.0;
    double d_used = 0.0;
    std::vector<double> residual_history; // residual before each step and after the last
    int krylov_iters = 0;                  // total over all Newton steps
    int factorizations = 0;
};

// Weighted inner product Re sum tw * f * conj(g) / (1 + |V|^2)^2 * h1 h2 over
// the quarter grid.
double weighted_dot(const ComplexField& f, const ComplexField& g, const ComplexField& V);

// c = <S[u], Z>_W / <Z, Z>_W.
double project_multiplier(const ComplexField& S, const ComplexField& Z, const ComplexField& V);

// Solves S_tag[u] = c Z with Re <u - V, Z>_W = 0 and u = V on the outer layer,
// starting from u = V. Throws on Newton or Krylov failure.
// Field rows of the assembled Newton matrix applied to (v, 0). Imaginary
// parts of v on the axis are ignored, as are outer-layer values.
ComplexField jacobian_apply(const ComplexField& u, const ComplexField& v, const ComplexField& V, const ComplexField& Z,
                            OpTag tag, const ModelParams& params);

SolveResult solve_projected(const ModelParams& params, const ComplexField& V_d, const ComplexField& Z_d,
                            OpTag tag, const SolverOptions& opts = {});

struct BalancedSample {
    double d = 0.0;
    double c_mult = 0.0;
};

struct BalancedResult {
    SolveResult result;
    double d_star = 0.0;
    std::vector<BalancedSample> samples; // every d visited, in order
};

// Root of d -> c_mult(d) on [d_lo, d_hi] with the grid held fixed. Stops when
// |c| <= 1e-10 * max(|c(d_lo)|, |c(d_hi)|) or the bracket is narrower than
// 1e-6 d. Throws when c has no sign change on the bracket.
BalancedResult solve_balanced(const ModelParams& params, double d_lo, double d_hi, const GridSpec& grid,
                              const VortexProfile& profile, const SolverOptions& opts = {});

// Domain used for balanced runs: L = 2 d_hi in both directions.
GridSpec balanced_grid(const ModelParams& params, double d_hi, double h);

} // namespace vortex
