#include "vortex/reduction.hpp"

#include "vortex/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace vortex {

double leading_c(double d, const ModelParams& params) {
    if (!(d > 1.0)) throw std::runtime_error("leading_c needs d > 1");
    const double pi = std::numbers::pi;
    double e = params.eps, k = params.kappa;
    if (!is_ring(params.regime)) return -pi / (4.0 * d) + pi * e / 4.0 - e * k * pi / 2.0;
    return pi * (-std::log(d) / (8.0 * d) + (1.0 - 2.0 * k) / 4.0 * e * std::abs(std::log(e)));
}

double predict_d(const ModelParams& params) {
    double a = 1.0 - 2.0 * params.kappa;
    if (!(a > 0.0)) throw std::runtime_error("predict_d needs 1 - 2 kappa > 0");
    if (!is_ring(params.regime)) return 1.0 / (a * params.eps);
    double rhs = 2.0 * a * params.eps * std::abs(std::log(params.eps));
    if (rhs >= 1.0 / std::numbers::e)
        throw std::runtime_error("no ring separation: (log d)/d cannot reach " + std::to_string(rhs));
    // (log d)/d decreases on (e, inf); bracket and bisect.
    double lo = std::numbers::e, hi = 2.0 * lo;
    while (std::log(hi) / hi > rhs) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (std::log(mid) / mid > rhs ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ReducedCurve numeric_c_curve(const ModelParams& params, const std::vector<double>& d_list, double h,
                             const VortexProfile& profile, const SolverOptions& opts) {
    if (d_list.empty()) throw std::runtime_error("empty d list");
    for (std::size_t k = 1; k < d_list.size(); ++k)
        if (!(d_list[k] > d_list[k - 1])) throw std::runtime_error("d list must be strictly increasing");

    ReducedCurve out;
    out.regime = params.regime;
    out.d_values = d_list;
    GridSpec grid = balanced_grid(params, d_list.back(), h);
    std::unique_ptr<RingPhaseSolver> ring;
    if (is_ring(params.regime)) ring = std::make_unique<RingPhaseSolver>(grid);
    OpTag tag = default_tag(params.regime);

    for (double d : d_list) {
        ModelParams p = with_d(params, d);
        out.c_leading.push_back(leading_c(d, p));
        try {
            ComplexField V = build_ansatz(p, grid, profile, ring.get());
            ComplexField Z = kernel_Zd(p, profile, V, ring.get());
            out.c_values.push_back(solve_projected(p, V, Z, tag, opts).c_mult);
        } catch (const std::exception& e) {
            out.c_values.push_back(std::numeric_limits<double>::quiet_NaN());
            if (out.complete) out.failure = e.what();
            out.complete = false;
        }
    }

    // Without a predicted root the smallest sampled d is the reference.
    double target = d_list.front();
    try {
        target = 0.5 * predict_d(params);
    } catch (const std::runtime_error&) {
    }
    std::size_t ref = 0;
    for (std::size_t k = 1; k < d_list.size(); ++k)
        if (std::abs(d_list[k] - target) < std::abs(d_list[ref] - target)) ref = k;
    out.d_ref = d_list[ref];
    if (std::isfinite(out.c_values[ref]) && out.c_values[ref] * out.c_leading[ref] < 0.0) out.sign = -1.0;
    for (double& c : out.c_leading) c *= out.sign;
    return out;
}

std::vector<double> curve_roots(const ReducedCurve& curve) {
    std::vector<double> roots;
    const auto& d = curve.d_values;
    const auto& c = curve.c_values;
    for (std::size_t k = 1; k < d.size(); ++k) {
        if (!std::isfinite(c[k - 1]) || !std::isfinite(c[k])) continue;
        if (c[k - 1] == 0.0) roots.push_back(d[k - 1]);
        else if (c[k - 1] * c[k] < 0.0) roots.push_back(d[k - 1] - c[k - 1] * (d[k] - d[k - 1]) / (c[k] - c[k - 1]));
    }
    if (!c.empty() && c.back() == 0.0) roots.push_back(d.back());
    return roots;
}

} // namespace vortex
