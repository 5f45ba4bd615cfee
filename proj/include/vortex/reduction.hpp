#pragma once

#include "vortex/params.hpp"
#include "vortex/profile.hpp"
#include "vortex/solver.hpp"

#include <string>
#include <vector>

namespace vortex {

// Leading-order multiplier with unit normalization:
// PAIR: -pi/(4d) + pi eps/4 - pi eps kappa/2,
// RING: pi (-(log d)/(8d) + (1 - 2 kappa)/4 * eps |log eps|).
double leading_c(double d, const ModelParams& params);

// PAIR: 1/((1 - 2 kappa) eps). RING: root d > e of (log d)/d = 2 (1 - 2 kappa) eps |log eps|.
double predict_d(const ModelParams& params);

struct ReducedCurve {
    Regime regime = Regime::pair_wm;
    std::vector<double> d_values;
    std::vector<double> c_values;  // numeric multipliers; NaN where the solve failed
    std::vector<double> c_leading; // leading_c times sign
    double sign = 1.0;             // makes both curves agree in sign at the reference d
    double d_ref = 0.0;
    bool complete = true;
    std::string failure;           // first solver error, if any
};

// Solves the projected problem at each d on one grid (L = 2 max(d_list)).
// The reference point for the sign convention is the d closest to
// predict_d / 2.
ReducedCurve numeric_c_curve(const ModelParams& params, const std::vector<double>& d_list, double h,
                             const VortexProfile& profile, const SolverOptions& opts = {});

// Zero crossings of the numeric curve by linear interpolation between samples.
std::vector<double> curve_roots(const ReducedCurve& curve);

} // namespace vortex
