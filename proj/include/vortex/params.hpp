#pragma once

#include <string>

namespace vortex {

enum class Regime { pair_wm, pair_sch, ring_wm, ring_sch };

struct ModelParams {
    Regime regime = Regime::pair_wm;
    double eps = 0.05;
    double kappa = 0.0;
    double c = 0.0;     // traveling speed
    double omega = 0.0; // time frequency
    double d_hat = 1.0;
    double d = 20.0;
};

bool is_ring(Regime r);
bool is_schroedinger(Regime r);
std::string regime_name(Regime r);
Regime parse_regime(const std::string& name);

// eps |log eps| for rings, eps for pairs: the factor in front of Q2 and T2.
double eps_factor(const ModelParams& p);

// Validates eps, kappa, d_hat and derives c, omega and d = d_hat / eps.
// Wave-map regimes require kappa = 0.
ModelParams make_params(Regime regime, double eps, double kappa, double d_hat);

// Same parameters with the half-separation replaced by d.
ModelParams with_d(const ModelParams& p, double d);

} // namespace vortex
