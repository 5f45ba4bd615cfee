#include "vortex/solver.hpp"

#include "vortex/diagnostics.hpp"

#include "sparse_lu.hpp"
#include "stencil.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vortex {

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// Real unknowns: Re u on every node off the outer layer, Im u only off the
// x2 = 0 axis (where u is real by symmetry). The last unknown is c.
struct Layout {
    GridSpec g;
    std::vector<int> re, im;
    int n = 0; // field unknowns; c sits at index n

    explicit Layout(const GridSpec& spec) : g(spec), re(spec.size(), -1), im(spec.size(), -1) {
        for (int i = 0; i + 1 < g.n1; ++i) {
            for (int j = 0; j + 1 < g.n2; ++j) {
                re[g.index(i, j)] = n++;
                if (j > 0) im[g.index(i, j)] = n++;
            }
        }
    }

    Vec pack(const ComplexField& u, double c) const {
        Vec x(n + 1);
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (re[k] >= 0) x[re[k]] = u.data[k].real();
            if (im[k] >= 0) x[im[k]] = u.data[k].imag();
        }
        x[n] = c;
        return x;
    }

    // Writes the unknowns into u; nodes without an unknown keep their value.
    void unpack(const Vec& x, ComplexField& u) const {
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (re[k] < 0) continue;
            u.data[k] = {x[re[k]], im[k] >= 0 ? x[im[k]] : 0.0};
        }
    }
};

struct Problem {
    const Layout& lay;
    const ComplexField& V;
    const ComplexField& Z;
    std::vector<double> w; // tw * h1 h2 / (1 + |V|^2)^2
    OpTag tag;
    OpCoefficients k;

    Problem(const Layout& l, const ComplexField& v, const ComplexField& z, OpTag t, const ModelParams& p)
        : lay(l), V(v), Z(z), w(v.data.size()), tag(t), k(op_coefficients(t, p)) {
        const GridSpec& g = l.g;
        for (int i = 0; i < g.n1; ++i) {
            for (int j = 0; j < g.n2; ++j) {
                double q = 1.0 + std::norm(v(i, j));
                w[g.index(i, j)] = trapezoid_weight(g, i, j) * g.h1 * g.h2 / (q * q);
            }
        }
    }

    double constraint(const ComplexField& u) const {
        double acc = 0.0;
        for (std::size_t k2 = 0; k2 < u.data.size(); ++k2)
            acc += w[k2] * ((u.data[k2] - V.data[k2]) * std::conj(Z.data[k2])).real();
        return acc;
    }

    // Residual vector and its discrete L2 norm.
    double residual(const ComplexField& u, double c, Vec& F) const {
        const GridSpec& g = lay.g;
        F.setZero(lay.n + 1);
        double acc = 0.0;
        for (int i = 0; i + 1 < g.n1; ++i) {
            for (int j = 0; j + 1 < g.n2; ++j) {
                std::size_t id = g.index(i, j);
                cplx r = detail::node_S(detail::gather(u, i, j), g.h1, g.h2, g.x1(i), i == 0, k) - c * Z.data[id];
                F[lay.re[id]] = r.real();
                if (lay.im[id] >= 0) F[lay.im[id]] = r.imag();
                acc += trapezoid_weight(g, i, j) * std::norm(r);
            }
        }
        F[lay.n] = constraint(u);
        return std::sqrt(acc * g.h1 * g.h2 + F[lay.n] * F[lay.n]);
    }

    SpMat jacobian(const ComplexField& u) const {
        const GridSpec& g = lay.g;
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(static_cast<std::size_t>(lay.n) * 12);
        double ih1 = 1.0 / (g.h1 * g.h1), ih2 = 1.0 / (g.h2 * g.h2);
        const cplx I(0.0, 1.0);

        for (int i = 0; i + 1 < g.n1; ++i) {
            for (int j = 0; j + 1 < g.n2; ++j) {
                std::size_t id = g.index(i, j);
                int row_re = lay.re[id], row_im = lay.im[id];
                bool axis = i == 0;
                detail::Stencil st = detail::gather(u, i, j);
                cplx a = (st.e - st.w) * (0.5 / g.h1);
                cplx b = (st.n - st.s) * (0.5 / g.h2);
                cplx G = a * a + b * b;
                cplx ub = std::conj(st.c);
                double s = std::norm(st.c), q = 1.0 + s;
                double gs = (1.0 - s) / q, gp = -2.0 / (q * q);

                cplx Ka = -4.0 * ub * a / q;
                if (k.h1 && !axis) Ka += 1.0 / g.x1(i);
                cplx Kb = -4.0 * ub * b / q + k.q2 * gs * I - k.t2 * I;

                cplx Pc = -2.0 * ih1 - 2.0 * ih2 + 2.0 * ub * ub * G / (q * q) + gs + s * gp
                          + k.q2 * I * b * gp * ub;
                cplx Rc = -2.0 * G / q + 2.0 * s * G / (q * q) + gp * st.c * st.c + k.q2 * I * b * gp * st.c;
                cplx Pe = ih1 + Ka * (0.5 / g.h1), Pw = ih1 - Ka * (0.5 / g.h1);
                cplx Pn = ih2 + Kb * (0.5 / g.h2), Ps = ih2 - Kb * (0.5 / g.h2);
                if (k.h1 && axis) {
                    Pe += 2.0 * ih1;
                    Pc -= 2.0 * ih1;
                }

                auto add = [&](int ii, int jj, cplx P, cplx R) {
                    if (ii == g.n1 - 1 || jj == g.n2 - 1) return; // Dirichlet node
                    std::size_t m = g.index(ii, jj);
                    cplx A = P + R, B = I * (P - R);
                    t.emplace_back(row_re, lay.re[m], A.real());
                    if (row_im >= 0) t.emplace_back(row_im, lay.re[m], A.imag());
                    if (lay.im[m] >= 0) {
                        t.emplace_back(row_re, lay.im[m], B.real());
                        if (row_im >= 0) t.emplace_back(row_im, lay.im[m], B.imag());
                    }
                };
                add(i, j, Pc, Rc);
                add(i + 1, j, Pe, 0.0);
                add(axis ? 1 : i - 1, j, Pw, 0.0);
                add(i, j + 1, Pn, 0.0);
                // The ghost below the axis is conj u(i, 1).
                if (j == 0) add(i, 1, 0.0, Ps);
                else add(i, j - 1, Ps, 0.0);

                t.emplace_back(row_re, lay.n, -Z.data[id].real());
                if (row_im >= 0) t.emplace_back(row_im, lay.n, -Z.data[id].imag());
                t.emplace_back(lay.n, row_re, w[id] * Z.data[id].real());
                if (row_im >= 0) t.emplace_back(lay.n, row_im, w[id] * Z.data[id].imag());
            }
        }
        SpMat J(lay.n + 1, lay.n + 1);
        J.setFromTriplets(t.begin(), t.end());
        return J;
    }
};

// Restarted GMRES with right preconditioning by M^-1; the stopping test is on
// the true relative residual |b - A x| / |b|. Returns iterations used, or -1.
int gmres(const SpMat& A, const detail::SparseLU& M, const Vec& b, Vec& x, double tol, int restart,
          int max_iter) {
    double bnorm = b.norm();
    x.setZero(b.size());
    if (bnorm == 0.0) return 0;
    int total = 0;
    Vec r = b;
    while (total < max_iter) {
        double beta = r.norm();
        if (beta <= tol * bnorm) return total;
        int m = std::min(restart, max_iter - total);
        Eigen::MatrixXd Vb(b.size(), m + 1), Zb(b.size(), m);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
        Vec cs(m), sn(m), gvec = Vec::Zero(m + 1);
        Vb.col(0) = r / beta;
        gvec[0] = beta;
        int used = 0;
        for (int jj = 0; jj < m; ++jj) {
            Zb.col(jj) = M.solve(Vb.col(jj));
            Vec wv = A * Zb.col(jj);
            for (int l = 0; l <= jj; ++l) {
                H(l, jj) = Vb.col(l).dot(wv);
                wv -= H(l, jj) * Vb.col(l);
            }
            H(jj + 1, jj) = wv.norm();
            if (H(jj + 1, jj) > 0.0) Vb.col(jj + 1) = wv / H(jj + 1, jj);
            for (int l = 0; l < jj; ++l) {
                double tmp = cs[l] * H(l, jj) + sn[l] * H(l + 1, jj);
                H(l + 1, jj) = -sn[l] * H(l, jj) + cs[l] * H(l + 1, jj);
                H(l, jj) = tmp;
            }
            double den = std::hypot(H(jj, jj), H(jj + 1, jj));
            cs[jj] = H(jj, jj) / den;
            sn[jj] = H(jj + 1, jj) / den;
            H(jj, jj) = den;
            H(jj + 1, jj) = 0.0;
            gvec[jj + 1] = -sn[jj] * gvec[jj];
            gvec[jj] *= cs[jj];
            used = jj + 1;
            ++total;
            if (std::abs(gvec[jj + 1]) <= 0.1 * tol * bnorm || H(jj, jj) == 0.0) break;
        }
        Vec y = H.topLeftCorner(used, used).triangularView<Eigen::Upper>().solve(gvec.head(used));
        x += Zb.leftCols(used) * y;
        r = b - A * x;
    }
    return r.norm() <= tol * bnorm ? total : -1;
}

} // namespace

double weighted_dot(const ComplexField& f, const ComplexField& g, const ComplexField& V) {
    const GridSpec& s = V.spec;
    double acc = 0.0;
    for (int i = 0; i < s.n1; ++i) {
        for (int j = 0; j < s.n2; ++j) {
            double q = 1.0 + std::norm(V(i, j));
            acc += trapezoid_weight(s, i, j) / (q * q) * (f(i, j) * std::conj(g(i, j))).real();
        }
    }
    return acc * s.h1 * s.h2;
}

ComplexField jacobian_apply(const ComplexField& u, const ComplexField& v, const ComplexField& V, const ComplexField& Z,
                            OpTag tag, const ModelParams& params) {
    Layout lay(u.spec);
    Problem prob(lay, V, Z, tag, params);
    Vec y = prob.jacobian(u) * lay.pack(v, 0.0);
    ComplexField out(u.spec);
    lay.unpack(y, out);
    return out;
}

double project_multiplier(const ComplexField& S, const ComplexField& Z, const ComplexField& V) {
    double zz = weighted_dot(Z, Z, V);
    if (zz == 0.0) throw std::runtime_error("co-kernel field vanishes");
    return weighted_dot(S, Z, V) / zz;
}

SolveResult solve_projected(const ModelParams& params, const ComplexField& V_d, const ComplexField& Z_d,
                            OpTag tag, const SolverOptions& opts) {
    check_tag(tag, V_d.spec.symmetry);
    if (!(V_d.spec == Z_d.spec)) throw std::runtime_error("ansatz and co-kernel grids differ");

    Layout lay(V_d.spec);
    Problem prob(lay, V_d, Z_d, tag, params);

    SolveResult res;
    res.d_used = params.d;
    res.u = V_d;
    double c = project_multiplier(apply_S(V_d, tag, params), Z_d, V_d);
    Vec x = lay.pack(res.u, c), F;
    double rn = prob.residual(res.u, c, F);
    res.residual_history.push_back(rn);

    detail::SparseLU lu;
    bool refactor = true;
    int it = 0;
    for (; it < opts.newton_max && rn > opts.newton_tol; ++it) {
        SpMat J = prob.jacobian(res.u);
        if (refactor) {
            lu.factorize(J);
            ++res.factorizations;
            refactor = false;
        }
        Vec dx;
        int kit = gmres(J, lu, -F, dx, opts.krylov_tol, opts.krylov_restart, opts.krylov_max);
        if (kit < 0 || kit > 20) {
            // Stale preconditioner: refresh it with the current Jacobian.
            res.krylov_iters += std::max(kit, 0);
            lu.factorize(J);
            ++res.factorizations;
            kit = gmres(J, lu, -F, dx, opts.krylov_tol, opts.krylov_restart, opts.krylov_max);
            if (kit < 0) {
                std::ostringstream msg;
                msg << "Krylov solver stagnated at Newton step " << it << ", residual " << rn;
                throw std::runtime_error(msg.str());
            }
        }
        res.krylov_iters += kit;
        if (kit > 5) refactor = true;

        double lambda = 1.0, trial_rn = 0.0;
        ComplexField trial = res.u;
        Vec trial_x, trial_F;
        for (int halvings = 0;; ++halvings) {
            trial_x = x + lambda * dx;
            lay.unpack(trial_x, trial);
            trial_rn = prob.residual(trial, trial_x[lay.n], trial_F);
            if ((std::isfinite(trial_rn) && trial_rn < rn) || halvings == 10) break;
            lambda *= 0.5;
        }
        if (!std::isfinite(trial_rn)) throw std::runtime_error("Newton iterate is not finite");
        x = trial_x;
        res.u = std::move(trial);
        F = std::move(trial_F);
        rn = trial_rn;
        res.residual_history.push_back(rn);
    }
    res.newton_iters = it;
    res.final_residual = rn;
    res.c_mult = x[lay.n];
    if (rn > opts.newton_tol) {
        std::ostringstream msg;
        msg << "Newton did not converge in " << opts.newton_max << " iterations, residual " << rn;
        throw std::runtime_error(msg.str());
    }
    res.corrector_norm_star = corrector_norms(res.u, V_d, params).at("star");
    return res;
}

GridSpec balanced_grid(const ModelParams& params, double d_hi, double h) {
    return make_grid(2.0 * d_hi, 2.0 * d_hi, h, h, is_ring(params.regime) ? Symmetry::ring : Symmetry::pair);
}

BalancedResult solve_balanced(const ModelParams& params, double d_lo, double d_hi, const GridSpec& grid,
                              const VortexProfile& profile, const SolverOptions& opts) {
    if (!(d_lo > 1.0 && d_hi > d_lo)) throw std::runtime_error("invalid d bracket");
    OpTag tag = default_tag(params.regime);
    std::unique_ptr<RingPhaseSolver> ring;
    if (is_ring(params.regime)) ring = std::make_unique<RingPhaseSolver>(grid);

    BalancedResult out;
    auto eval = [&](double d) {
        ModelParams p = with_d(params, d);
        ComplexField V = build_ansatz(p, grid, profile, ring.get());
        ComplexField Z = kernel_Zd(p, profile, V, ring.get());
        SolveResult r = solve_projected(p, V, Z, tag, opts);
        out.samples.push_back({d, r.c_mult});
        return r;
    };

    SolveResult lo = eval(d_lo), hi = eval(d_hi);
    double c_lo = lo.c_mult, c_hi = hi.c_mult;
    if (c_lo == 0.0) {
        out.result = std::move(lo);
        out.d_star = d_lo;
        return out;
    }
    if (c_hi == 0.0) {
        out.result = std::move(hi);
        out.d_star = d_hi;
        return out;
    }
    if ((c_lo > 0.0) == (c_hi > 0.0)) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "no sign change of c on [" << d_lo << ", " << d_hi << "]: c = " << c_lo << ", " << c_hi;
        throw std::runtime_error(msg.str());
    }

    // Illinois variant of regula falsi.
    double scale = std::max(std::abs(c_lo), std::abs(c_hi));
    double a = d_lo, b = d_hi, fa = c_lo, fb = c_hi;
    int side = 0;
    SolveResult best = std::abs(c_lo) < std::abs(c_hi) ? std::move(lo) : std::move(hi);
    double best_d = std::abs(c_lo) < std::abs(c_hi) ? d_lo : d_hi;
    for (int iter = 0; iter < 60; ++iter) {
        double m = (a * fb - b * fa) / (fb - fa);
        if (!(m > a && m < b)) m = 0.5 * (a + b);
        SolveResult r = eval(m);
        double fm = r.c_mult;
        if (std::abs(fm) <= std::abs(best.c_mult)) {
            best = std::move(r);
            best_d = m;
        }
        if (std::abs(fm) <= 1e-10 * scale) break;
        if ((fm > 0.0) == (fb > 0.0)) {
            b = m;
            fb = fm;
            if (side == 1) fa *= 0.5;
            side = 1;
        } else {
            a = m;
            fa = fm;
            if (side == -1) fb *= 0.5;
            side = -1;
        }
        if (b - a <= 1e-6 * m) break;
    }
    out.result = std::move(best);
    out.d_star = best_d;
    return out;
}

} // namespace vortex
