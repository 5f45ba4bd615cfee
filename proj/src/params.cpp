#include "vortex/params.hpp"

#include <cmath>
#include <stdexcept>

namespace vortex {

bool is_ring(Regime r) { return r == Regime::ring_wm || r == Regime::ring_sch; }

bool is_schroedinger(Regime r) { return r == Regime::pair_sch || r == Regime::ring_sch; }

std::string regime_name(Regime r) {
    switch (r) {
    case Regime::pair_wm: return "PAIR_WM";
    case Regime::pair_sch: return "PAIR_SCH";
    case Regime::ring_wm: return "RING_WM";
    case Regime::ring_sch: return "RING_SCH";
    }
    throw std::runtime_error("unknown regime");
}

Regime parse_regime(const std::string& name) {
    for (Regime r : {Regime::pair_wm, Regime::pair_sch, Regime::ring_wm, Regime::ring_sch})
        if (regime_name(r) == name) return r;
    throw std::runtime_error("unknown regime '" + name + "'");
}

double eps_factor(const ModelParams& p) {
    return is_ring(p.regime) ? p.eps * std::abs(std::log(p.eps)) : p.eps;
}

ModelParams make_params(Regime regime, double eps, double kappa, double d_hat) {
    if (!(eps > 0.0 && eps <= 0.2)) throw std::runtime_error("eps must lie in (0, 0.2]");
    if (!(d_hat >= 0.01 && d_hat <= 100.0)) throw std::runtime_error("d_hat must lie in [1/100, 100]");
    if (!(1.0 - 2.0 * kappa > 0.0)) throw std::runtime_error("kappa must satisfy 1 - 2 kappa > 0");
    if (!is_schroedinger(regime) && kappa != 0.0)
        throw std::runtime_error("wave-map regimes have omega = 0 and need kappa = 0");
    ModelParams p;
    p.regime = regime;
    p.eps = eps;
    p.kappa = kappa;
    p.d_hat = d_hat;
    p.d = d_hat / eps;
    // a = 2c / sqrt(1 - c^2) inverts to c = a / sqrt(4 + a^2).
    double a = eps_factor(p);
    p.c = a / std::sqrt(4.0 + a * a);
    p.omega = kappa * a * std::sqrt(1.0 - p.c * p.c);
    return p;
}

ModelParams with_d(const ModelParams& p, double d) {
    ModelParams q = make_params(p.regime, p.eps, p.kappa, d * p.eps);
    q.d = d;
    return q;
}

} // namespace vortex
