#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace vortex {

// Degree-one core profile rho(ell) on uniform knots ell_i = ell0 + i*step.
struct VortexProfile {
    std::vector<double> knots;
    std::vector<double> rho;
    std::vector<double> drho;
    double slope_a = 0.0;
    double tail_c0 = 0.0;
    double ode_tol = 0.0;
    double step = 0.0;
};

inline constexpr double profile_ell0 = 1e-3;

VortexProfile solve_profile(double ell_max = 30.0, double step = 1e-3, double tol = 1e-10);

// (rho, rho') with Hermite interpolation between knots, the linear core below
// ell0 and the exponential tail law beyond the last knot.
std::pair<double, double> eval_profile(const VortexProfile& p, double ell);

struct ProfileIntegrals {
    double i1 = 0.0; // int rho rho' / (1 + rho^2)^2
    double i2 = 0.0; // int (1 - rho^2) rho rho' / (1 + rho^2)^3
};

// Integrals over [0, upper]; the default upper bound integrates to infinity
// by adding the closed-form remainder past the last knot.
ProfileIntegrals profile_integrals(const VortexProfile& p,
                                   double upper = std::numeric_limits<double>::infinity());

// Residual of the profile ODE at knot i, with rho'' from a fourth-order
// difference of the stored rho'. Valid for 2 <= i < knots.size() - 2.
double profile_ode_residual(const VortexProfile& p, std::size_t i);

// Right-hand side rho'' of the profile ODE.
double profile_rhs(double ell, double rho, double drho);

// Least-squares slope of log(1 - rho) + log(ell)/2 against ell over [lo, hi].
double profile_tail_slope(const VortexProfile& p, double lo = 8.0, double hi = 14.0);

} // namespace vortex
