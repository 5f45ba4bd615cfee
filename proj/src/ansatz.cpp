#include "vortex/ansatz.hpp"

#include "sparse_lu.hpp"
#include "stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vortex {

VortexGeometry vortex_geometry(Point center, Point point) {
    double y1 = point[0] - center[0], y2 = point[1] - center[1];
    double r2 = y1 * y1 + y2 * y2;
    if (r2 == 0.0) throw std::runtime_error("vortex_geometry: point coincides with the center");
    double r = std::sqrt(r2);
    VortexGeometry g;
    g.ell = r;
    g.theta = std::atan2(y2, y1);
    g.grad_ell = {y1 / r, y2 / r};
    g.grad_theta = {-y2 / r2, y1 / r2};
    return g;
}

namespace {

// rho(ell) e^{i theta} = (rho(ell) / ell) * (y1 + i y2), regular at the core.
cplx unit_vortex(const VortexProfile& profile, double y1, double y2, bool conjugate) {
    double ell = std::hypot(y1, y2);
    if (ell == 0.0) return {0.0, 0.0};
    double ratio = eval_profile(profile, ell).first / ell;
    return {ratio * y1, conjugate ? -ratio * y2 : ratio * y2};
}

void check_inside(const ModelParams& params, const GridSpec& spec) {
    // The core disc of radius 3 must fit inside the stored domain.
    if (!(params.d > 0.0 && params.d + 3.0 <= spec.l1))
        throw std::runtime_error("ansatz: vortex core at d = " + std::to_string(params.d) + " does not fit in the domain");
}

} // namespace

ComplexField build_pair(const ModelParams& params, const GridSpec& spec, const VortexProfile& profile) {
    check_inside(params, spec);
    ComplexField v(spec);
    double d = params.d;
    for (int i = 0; i < spec.n1; ++i) {
        double x1 = spec.x1(i);
        for (int j = 0; j < spec.n2; ++j) {
            double x2 = spec.x2(j);
            v(i, j) = unit_vortex(profile, x1 - d, x2, false) * unit_vortex(profile, x1 + d, x2, true);
        }
    }
    return v;
}

namespace {

struct CutoffDerivs {
    double chi, dchi, ddchi;
};

// C-infinity step 1 - f(t) / (f(t) + f(1 - t)), f(t) = exp(-1/t), on
// t = (r - d/10) / (d/10), with its first two r-derivatives.
CutoffDerivs cutoff_derivs(double r, double d) {
    double r0 = 0.1 * d, w = 0.1 * d;
    double t = (r - r0) / w;
    if (t <= 0.0) return {1.0, 0.0, 0.0};
    if (t >= 1.0) return {0.0, 0.0, 0.0};
    auto f = [](double x, double& d1, double& d2) {
        double v = std::exp(-1.0 / x);
        d1 = v / (x * x);
        d2 = v * (1.0 - 2.0 * x) / (x * x * x * x);
        return v;
    };
    double fa1, fa2, fb1, fb2;
    double fa = f(t, fa1, fa2);
    double fb = f(1.0 - t, fb1, fb2);
    fb1 = -fb1; // d/dt of f(1 - t)
    double s = fa + fb, s1 = fa1 + fb1, s2 = fa2 + fb2;
    double q = fa / s;
    double q1 = (fa1 * s - fa * s1) / (s * s);
    double q2 = (fa2 - 2.0 * q1 * s1 - q * s2) / s;
    return {1.0 - q, -q1 / w, -q2 / (w * w)};
}

double phi_s_value(double d, double x1, double x2) {
    if (x2 == 0.0) return 0.0;
    double r1sq = (x1 - d) * (x1 - d) + x2 * x2, r2sq = (x1 + d) * (x1 + d) + x2 * x2;
    double chi = cutoff_derivs(std::sqrt(r1sq), d).chi;
    if (chi == 0.0) return 0.0;
    return chi * x2 * std::log(r1sq / r2sq) / (4.0 * d);
}

} // namespace

double ring_cutoff(double r, double d) { return cutoff_derivs(r, d).chi; }

double ring_phase_source(const ModelParams& params, double x1, double x2) {
    if (x2 == 0.0) return 0.0;
    double d = params.d;
    double y1 = x1 - d, p1 = x1 + d;
    double r1sq = y1 * y1 + x2 * x2, r2sq = p1 * p1 + x2 * x2;
    if (x1 == 0.0) {
        // H1 -> d^2/dx1^2 on the axis, and Theta = theta_e1 - theta_e2 is harmonic.
        return -(2.0 * x2 * y1 / (r1sq * r1sq) - 2.0 * x2 * p1 / (r2sq * r2sq));
    }
    double d1theta = -x2 / r1sq + x2 / r2sq;
    double total = d1theta / x1;
    double r = std::sqrt(r1sq);
    CutoffDerivs c = cutoff_derivs(r, d);
    if (c.chi != 0.0 || c.dchi != 0.0) {
        double L = std::log(r1sq / r2sq);
        double dL1 = 2.0 * y1 / r1sq - 2.0 * p1 / r2sq;
        double dL2 = 2.0 * x2 / r1sq - 2.0 * x2 / r2sq;
        double A = x2 * L / (4.0 * d);
        double dA1 = x2 * dL1 / (4.0 * d);
        double dA2 = (L + x2 * dL2) / (4.0 * d);
        double lapA = (x2 / r1sq - x2 / r2sq) / d;
        double gr1 = y1 / r, gr2 = x2 / r;
        double lap = c.chi * lapA + 2.0 * c.dchi * (gr1 * dA1 + gr2 * dA2) + A * (c.ddchi + c.dchi / r);
        double d1 = c.dchi * gr1 * A + c.chi * dA1;
        total += lap + d1 / x1;
    }
    return -total;
}

struct RingPhaseSolver::Impl {
    std::vector<int> index; // unknown number of node, -1 if fixed
    detail::SparseLU lu;
};

RingPhaseSolver::RingPhaseSolver(const GridSpec& spec) : spec_(spec), impl_(std::make_unique<Impl>()) {
    if (spec.symmetry != Symmetry::ring) throw std::runtime_error("ring phase needs a RING grid");
    const GridSpec& g = spec_;
    impl_->index.assign(g.size(), -1);
    int count = 0;
    for (int i = 0; i + 1 < g.n1; ++i)
        for (int j = 1; j + 1 < g.n2; ++j) impl_->index[g.index(i, j)] = count++;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(count) * 5);
    double a1 = 1.0 / (g.h1 * g.h1), a2 = 1.0 / (g.h2 * g.h2);
    auto add = [&](int row, int i, int j, double value) {
        if (i < 0) i = -i;
        int col = impl_->index[g.index(i, j)];
        if (col >= 0) trips.emplace_back(row, col, value);
    };
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 1; j + 1 < g.n2; ++j) {
            int row = impl_->index[g.index(i, j)];
            add(row, i, j, -2.0 * a1 - 2.0 * a2);
            add(row, i + 1, j, a1);
            add(row, i - 1, j, a1);
            add(row, i, j + 1, a2);
            add(row, i, j - 1, a2);
            if (i == 0) {
                add(row, i + 1, j, 2.0 * a1);
                add(row, i, j, -2.0 * a1);
            } else {
                double c = 0.5 / (g.h1 * g.x1(i));
                add(row, i + 1, j, c);
                add(row, i - 1, j, -c);
            }
        }
    }
    Eigen::SparseMatrix<double> m(count, count);
    m.setFromTriplets(trips.begin(), trips.end());
    impl_->lu.factorize(m);
}

RingPhaseSolver::~RingPhaseSolver() = default;
RingPhaseSolver::RingPhaseSolver(RingPhaseSolver&&) noexcept = default;
RingPhaseSolver& RingPhaseSolver::operator=(RingPhaseSolver&&) noexcept = default;

RingPhase RingPhaseSolver::solve(const ModelParams& params) const {
    if (!is_ring(params.regime)) throw std::runtime_error("ring phase needs a RING regime");
    check_inside(params, spec_);
    const GridSpec& g = spec_;
    RingPhase out{ScalarField(g), ScalarField(g)};
    double d = params.d;
    // Theta + phi_s on the closed upper half plane (Theta jumps only at e1).
    ScalarField total(g);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double x1 = g.x1(i), x2 = g.x2(j);
            out.phi_s(i, j) = phi_s_value(d, x1, x2);
            total(i, j) = std::atan2(x2, x1 - d) - std::atan2(x2, x1 + d) + out.phi_s(i, j);
        }
    }
    // The source is the discrete operator applied to Theta + phi_s, so that
    // the discrete phase equation holds exactly; within unit distance of the
    // core, where Theta is not resolved, the closed form is used instead.
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(impl_->lu.rows()));
    double a1 = 1.0 / (g.h1 * g.h1), a2 = 1.0 / (g.h2 * g.h2);
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 1; j + 1 < g.n2; ++j) {
            int k = impl_->index[g.index(i, j)];
            double x1 = g.x1(i), x2 = g.x2(j);
            if (std::hypot(x1 - d, x2) < 1.0) {
                rhs[k] = ring_phase_source(params, x1, x2);
                continue;
            }
            double c = total(i, j), e = total(i + 1, j), w = total(i == 0 ? 1 : i - 1, j);
            double n = total(i, j + 1), s = total(i, j - 1);
            double op = (e - 2.0 * c + w) * a1 + (n - 2.0 * c + s) * a2;
            op += i == 0 ? 2.0 * a1 * (e - c) : (e - w) / (2.0 * g.h1 * x1);
            rhs[k] = -op;
        }
    }
    Eigen::VectorXd sol = impl_->lu.solve(rhs);
    double resid = (impl_->lu.matrix() * sol - rhs).norm();
    if (!std::isfinite(resid) || resid > 1e-8 * std::max(1.0, rhs.norm()))
        throw std::runtime_error("ring phase: linear solve did not converge");
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            int k = impl_->index[g.index(i, j)];
            if (k >= 0) out.phi_r(i, j) = sol[k];
        }
    return out;
}

RingPhase build_ring_phase(const ModelParams& params, const GridSpec& spec) {
    return RingPhaseSolver(spec).solve(params);
}

ComplexField build_ring(const ModelParams& params, const GridSpec& spec, const VortexProfile& profile,
                        const RingPhase& phases) {
    if (!is_ring(params.regime)) throw std::runtime_error("build_ring needs a RING regime");
    if (!(phases.phi_s.spec == spec && phases.phi_r.spec == spec))
        throw std::runtime_error("build_ring: phase grid does not match");
    ComplexField v = build_pair(params, spec, profile);
    for (std::size_t k = 0; k < v.data.size(); ++k) {
        double phi = phases.phi_s.data[k] + phases.phi_r.data[k];
        if (phi != 0.0) v.data[k] *= cplx(std::cos(phi), std::sin(phi));
    }
    return v;
}

ComplexField build_ansatz(const ModelParams& params, const GridSpec& spec, const VortexProfile& profile,
                          const RingPhaseSolver* ring_solver) {
    bool ring = is_ring(params.regime);
    if (ring != (spec.symmetry == Symmetry::ring))
        throw std::runtime_error("ansatz: regime does not match the grid symmetry");
    if (!ring) return build_pair(params, spec, profile);
    if (ring_solver) return build_ring(params, spec, profile, ring_solver->solve(params));
    return build_ring(params, spec, profile, build_ring_phase(params, spec));
}

double cutoff_eta(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    double s = t - 1.0;
    return 1.0 - s * s * (3.0 - 2.0 * s);
}

ComplexField kernel_Zd(const ModelParams& params, const VortexProfile& profile, const ComplexField& V_d,
                       const RingPhaseSolver* ring_solver) {
    const GridSpec& g = V_d.spec;
    std::unique_ptr<RingPhaseSolver> own;
    if (is_ring(params.regime) && !ring_solver) {
        own = std::make_unique<RingPhaseSolver>(g);
        ring_solver = own.get();
    }
    double delta = 1e-3 * params.d;
    ComplexField vp = build_ansatz(with_d(params, params.d + delta), g, profile, ring_solver);
    ComplexField vm = build_ansatz(with_d(params, params.d - delta), g, profile, ring_solver);
    ComplexField z(g);
    double d = params.d, R = cokernel_radius;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            double x1 = g.x1(i), x2 = g.x2(j);
            double w = cutoff_eta(std::hypot(x1 - d, x2) / R) + cutoff_eta(std::hypot(x1 + d, x2) / R);
            if (w == 0.0) continue;
            z(i, j) = w * (vp(i, j) - vm(i, j)) / (2.0 * delta);
        }
    }
    return z;
}

ErrorField error_field(const ComplexField& V, OpTag tag, const ModelParams& params) {
    const GridSpec& g = V.spec;
    ComplexField s = apply_S(V, tag, params);
    ErrorField out;
    out.field = ComplexField(g);
    bool ring = is_ring(params.regime);
    double d = params.d;
    double inner_acc = 0.0;
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 0; j + 1 < g.n2; ++j) {
            cplx sv = s(i, j), v = V(i, j);
            cplx e = std::abs(v) >= 0.1 ? detail::times_i(sv / v) : sv;
            out.field(i, j) = e;
            // Each quarter node stands for its mirror images; the nearest
            // core on the quarter is e1.
            double ell = std::hypot(g.x1(i) - d, g.x2(j));
            if (ell < 3.0) {
                if (ring)
                    inner_acc += trapezoid_weight(g, i, j) * std::pow(std::abs(sv), 14.0);
                else
                    inner_acc = std::max(inner_acc, std::abs(sv));
            }
            if (ell > 2.0) {
                out.outer_re = std::max(out.outer_re, std::pow(ell, 2.0 + weight_rho) * std::abs(e.real()));
                out.outer_im = std::max(out.outer_im, std::pow(ell, 1.0 + weight_rho) * std::abs(e.imag()));
            }
        }
    }
    // Sums over the two cores: sup terms double, the L^14 integral over both
    // full disks is four times the quarter integral.
    out.inner = ring ? std::pow(4.0 * inner_acc * g.h1 * g.h2, 1.0 / 14.0) : 2.0 * inner_acc;
    out.outer_re *= 2.0;
    out.outer_im *= 2.0;
    out.norm_star2 = out.inner + out.outer_re + out.outer_im;
    return out;
}

} // namespace vortex
