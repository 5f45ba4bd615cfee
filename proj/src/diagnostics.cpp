#include "vortex/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace vortex {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double jump_tol = 1e-6;

bool ambiguous(cplx a, cplx b, double inc) {
    return a == 0.0 || b == 0.0 || std::abs(inc) >= std::numbers::pi - jump_tol;
}

double increment(cplx a, cplx b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return std::arg(b * std::conj(a));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Plaquette windings of the full-plane extension. Plaquette (p, q) has its
// lower-left corner at signed node (p - (n1 - 1), q - (n2 - 1)).
struct PlaquetteSweep {
    int np = 0, nq = 0;
    std::vector<double> turns;   // raw phase sum / 2 pi
    std::vector<int> cluster;    // union-find root per plaquette
    std::vector<char> flagged;   // touches an ambiguous edge or has nonzero winding

    explicit PlaquetteSweep(const ComplexField& f) {
        const GridSpec& g = f.spec;
        int o1 = g.n1 - 1, o2 = g.n2 - 1;
        int ni = 2 * g.n1 - 1, nj = 2 * g.n2 - 1;
        np = ni - 1;
        nq = nj - 1;
        std::vector<cplx> val(static_cast<std::size_t>(ni) * nj);
        for (int a = 0; a < ni; ++a)
            for (int b = 0; b < nj; ++b) val[static_cast<std::size_t>(a) * nj + b] = full_value(f, a - o1, b - o2);
        auto at = [&](int a, int b) { return val[static_cast<std::size_t>(a) * nj + b]; };

        // Horizontal edge (a, b) -> (a + 1, b) and vertical edge (a, b) -> (a, b + 1).
        std::vector<double> hinc(static_cast<std::size_t>(ni) * nj, 0.0), vinc(hinc.size(), 0.0);
        std::vector<char> hamb(hinc.size(), 0), vamb(hinc.size(), 0);
        for (int a = 0; a < ni; ++a) {
            for (int b = 0; b < nj; ++b) {
                std::size_t k = static_cast<std::size_t>(a) * nj + b;
                if (a + 1 < ni) {
                    hinc[k] = increment(at(a, b), at(a + 1, b));
                    hamb[k] = ambiguous(at(a, b), at(a + 1, b), hinc[k]);
                }
                if (b + 1 < nj) {
                    vinc[k] = increment(at(a, b), at(a, b + 1));
                    vamb[k] = ambiguous(at(a, b), at(a, b + 1), vinc[k]);
                }
            }
        }

        std::size_t n = static_cast<std::size_t>(np) * nq;
        turns.assign(n, 0.0);
        flagged.assign(n, 0);
        UnionFind uf(n);
        auto pid = [&](int p, int q) { return static_cast<int>(static_cast<std::size_t>(p) * nq + q); };
        for (int p = 0; p < np; ++p) {
            for (int q = 0; q < nq; ++q) {
                std::size_t k = static_cast<std::size_t>(p) * nj + q;
                std::size_t ke = static_cast<std::size_t>(p + 1) * nj + q;
                double sum = hinc[k] + vinc[ke] - hinc[k + 1] - vinc[k];
                int id = pid(p, q);
                turns[id] = sum / two_pi;
                bool amb = hamb[k] || vamb[ke] || hamb[k + 1] || vamb[k];
                flagged[id] = amb || std::abs(turns[id]) > 0.5;
                // Plaquettes sharing an ambiguous edge form one cluster.
                if (hamb[k + 1] && q + 1 < nq) uf.unite(id, pid(p, q + 1));
                if (vamb[ke] && p + 1 < np) uf.unite(id, pid(p + 1, q));
            }
        }
        cluster.resize(n);
        for (std::size_t k = 0; k < n; ++k) cluster[k] = uf.find(static_cast<int>(k));
    }
};

} // namespace

cplx full_value(const ComplexField& f, int i, int j) {
    const GridSpec& g = f.spec;
    if (std::abs(i) >= g.n1 || std::abs(j) >= g.n2) throw std::runtime_error("full_value: index outside the grid");
    cplx v = f(std::abs(i), std::abs(j));
    return j < 0 ? std::conj(v) : v;
}

int winding_number(const std::vector<cplx>& loop) {
    if (loop.size() < 3) throw std::runtime_error("winding loop needs at least three samples");
    double sum = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        cplx a = loop[k], b = loop[(k + 1) % loop.size()];
        if (a == 0.0) throw std::runtime_error("field vanishes on the winding loop");
        double inc = increment(a, b);
        if (ambiguous(a, b, inc)) throw std::runtime_error("unresolved phase jump on the winding loop");
        sum += inc;
    }
    return static_cast<int>(std::lround(sum / two_pi));
}

int winding_number(const ComplexField& f, const LatticeRect& r) {
    if (r.i1 <= r.i0 || r.j1 <= r.j0) throw std::runtime_error("degenerate winding rectangle");
    std::vector<cplx> loop;
    for (int i = r.i0; i < r.i1; ++i) loop.push_back(full_value(f, i, r.j0));
    for (int j = r.j0; j < r.j1; ++j) loop.push_back(full_value(f, r.i1, j));
    for (int i = r.i1; i > r.i0; --i) loop.push_back(full_value(f, i, r.j1));
    for (int j = r.j1; j > r.j0; --j) loop.push_back(full_value(f, r.i0, j));
    return winding_number(loop);
}

std::vector<Vortex> detect_vortices(const ComplexField& f) {
    const GridSpec& g = f.spec;
    PlaquetteSweep sw(f);

    struct Cluster {
        double turns = 0.0;
        std::vector<int> members;
    };
    std::map<int, Cluster> clusters;
    for (std::size_t k = 0; k < sw.turns.size(); ++k) {
        if (!sw.flagged[k]) continue;
        Cluster& c = clusters[sw.cluster[k]];
        c.members.push_back(static_cast<int>(k));
    }
    // Cluster charge sums every member, flagged or not, so interior edges cancel.
    for (std::size_t k = 0; k < sw.turns.size(); ++k) {
        auto it = clusters.find(sw.cluster[k]);
        if (it != clusters.end()) it->second.turns += sw.turns[k];
    }

    std::vector<Cluster> charged;
    std::vector<int> charge;
    for (auto& [root, c] : clusters) {
        int q = static_cast<int>(std::lround(c.turns));
        if (q == 0) continue;
        charged.push_back(std::move(c));
        charge.push_back(q);
    }

    // Merge charged clusters whose plaquettes come within Chebyshev distance 2.
    UnionFind uf(charged.size());
    for (std::size_t a = 0; a < charged.size(); ++a) {
        for (std::size_t b = a + 1; b < charged.size(); ++b) {
            bool near = false;
            for (int pa : charged[a].members) {
                for (int pb : charged[b].members) {
                    int dp = std::abs(pa / sw.nq - pb / sw.nq), dq = std::abs(pa % sw.nq - pb % sw.nq);
                    if (std::max(dp, dq) <= 2) {
                        near = true;
                        break;
                    }
                }
                if (near) break;
            }
            if (near) uf.unite(static_cast<int>(a), static_cast<int>(b));
        }
    }

    std::map<int, Vortex> merged;
    std::map<int, int> counts;
    for (std::size_t a = 0; a < charged.size(); ++a) {
        int root = uf.find(static_cast<int>(a));
        Vortex& v = merged[root];
        v.charge += charge[a];
        for (int p : charged[a].members) {
            v.position[0] += (p / sw.nq - (g.n1 - 1) + 0.5) * g.h1;
            v.position[1] += (p % sw.nq - (g.n2 - 1) + 0.5) * g.h2;
            ++counts[root];
        }
    }

    std::vector<Vortex> out;
    const double tol = 1e-9;
    for (auto& [root, v] : merged) {
        if (v.charge == 0) continue;
        v.position[0] /= counts[root];
        v.position[1] /= counts[root];
        if (v.position[0] >= -tol * g.h1 && v.position[1] >= -tol * g.h2) {
            v.position[0] = std::max(v.position[0], 0.0);
            v.position[1] = std::max(v.position[1], 0.0);
            out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end(), [](const Vortex& a, const Vortex& b) { return a.position < b.position; });
    return out;
}

int total_winding(const ComplexField& f) {
    PlaquetteSweep sw(f);
    double sum = 0.0;
    for (double t : sw.turns) sum += t;
    return static_cast<int>(std::lround(sum));
}

SphereGrid sample_sphere(const std::function<cplx(double, double)>& psi, double x0, double y0, int n1, int n2,
                         double h1, double h2) {
    if (n1 < 3 || n2 < 3 || !(h1 > 0.0) || !(h2 > 0.0)) throw std::runtime_error("invalid sphere grid");
    SphereGrid s{n1, n2, h1, h2, x0, y0, {}};
    s.m.reserve(static_cast<std::size_t>(n1) * n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) s.m.push_back(unproject(psi(x0 + i * h1, y0 + j * h2)));
    return s;
}

SphereGrid sphere_grid(const ComplexField& u) {
    const GridSpec& g = u.spec;
    SphereGrid s{2 * g.n1 - 1, 2 * g.n2 - 1, g.h1, g.h2, -(g.n1 - 1) * g.h1, -(g.n2 - 1) * g.h2, {}};
    s.m.reserve(static_cast<std::size_t>(s.n1) * s.n2);
    for (int i = 0; i < s.n1; ++i)
        for (int j = 0; j < s.n2; ++j) s.m.push_back(unproject(full_value(u, i - (g.n1 - 1), j - (g.n2 - 1))));
    return s;
}

EnergyCharge energy_charge(const SphereGrid& m) {
    for (const SpherePoint& p : m.m) {
        double r = std::sqrt(p.m1 * p.m1 + p.m2 * p.m2 + p.m3 * p.m3);
        if (std::abs(r - 1.0) > 1e-6) throw std::runtime_error("energy_charge: sample off the unit sphere");
    }
    double e = 0.0, q = 0.0;
    for (int i = 1; i + 1 < m.n1; ++i) {
        for (int j = 1; j + 1 < m.n2; ++j) {
            const SpherePoint &c = m(i, j), &pe = m(i + 1, j), &pw = m(i - 1, j), &pn = m(i, j + 1),
                              &ps = m(i, j - 1);
            double a1 = (pe.m1 - pw.m1) / (2 * m.h1), a2 = (pe.m2 - pw.m2) / (2 * m.h1),
                   a3 = (pe.m3 - pw.m3) / (2 * m.h1);
            double b1 = (pn.m1 - ps.m1) / (2 * m.h2), b2 = (pn.m2 - ps.m2) / (2 * m.h2),
                   b3 = (pn.m3 - ps.m3) / (2 * m.h2);
            e += a1 * a1 + a2 * a2 + a3 * a3 + b1 * b1 + b2 * b2 + b3 * b3;
            q += c.m1 * (a2 * b3 - a3 * b2) + c.m2 * (a3 * b1 - a1 * b3) + c.m3 * (a1 * b2 - a2 * b1);
        }
    }
    double area = m.h1 * m.h2;
    return {e * area, q * area / (4.0 * std::numbers::pi)};
}

std::map<std::string, double> corrector_norms(const ComplexField& u, const ComplexField& V, const ModelParams& params) {
    if (!(u.spec == V.spec)) throw std::runtime_error("corrector_norms: grids differ");
    const GridSpec& g = u.spec;
    const double d = params.d, rho = 0.5;
    auto ell = [d](double x1, double x2) { return std::hypot(x1 - d, x2); };

    ComplexField phi(g), w(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        phi.data[k] = u.data[k] - V.data[k];
        // w = u/V - 1 = i psi carries the conjugate parity of u.
        if (std::abs(V.data[k]) > 0.1) w.data[k] = u.data[k] / V.data[k] - 1.0;
    }

    std::map<std::string, double> out;
    if (is_ring(params.regime)) {
        Derivatives<cplx> dphi = diff_ops(phi);
        ScalarField grad(g);
        for (std::size_t k = 0; k < g.size(); ++k)
            grad.data[k] = std::hypot(std::abs(dphi.d1.data[k]), std::abs(dphi.d2.data[k]));
        Region core = [&](double x1, double x2) { return ell(x1, x2) < 3.0; };
        double full = std::pow(4.0, 1.0 / 14.0);
        out["inner"] = full * (discrete_norm(phi, 14, nullptr, core) + discrete_norm(grad, 14, nullptr, core)
                               + discrete_norm(dphi.laplacian, 14, nullptr, core));
    } else {
        Region core2 = [&](double x1, double x2) { return ell(x1, x2) < 2.0; };
        Region core3 = [&](double x1, double x2) { return ell(x1, x2) < 3.0; };
        double c2 = discrete_norm(phi, inf_norm, nullptr, core2) + divided_difference_sup(phi, 1, core2)
                    + divided_difference_sup(phi, 2, core2);
        double c3 = discrete_norm(phi, inf_norm, nullptr, core3) + divided_difference_sup(phi, 1, core3)
                    + divided_difference_sup(phi, 2, core3);
        out["inner"] = 2.0 * (c2 + c3);
    }

    Derivatives<cplx> dw = diff_ops(w);
    ScalarField psi1(g), psi2(g), g1(g), g2(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        psi1.data[k] = w.data[k].imag();
        psi2.data[k] = -w.data[k].real();
        g1.data[k] = std::hypot(dw.d1.data[k].imag(), dw.d2.data[k].imag());
        g2.data[k] = std::hypot(dw.d1.data[k].real(), dw.d2.data[k].real());
    }
    // The outer strip holds the layer where u is pinned to V by the Dirichlet
    // data; it is left out of the decay weights.
    Region bulk = [&](double x1, double x2) {
        return x1 <= g.l1 - dirichlet_margin && x2 <= g.l2 - dirichlet_margin;
    };
    auto weighted = [&](const ScalarField& f, double power) {
        NormWeight wt{{Point{d, 0.0}}, power, 2.0};
        return 2.0 * discrete_norm(f, inf_norm, &wt, bulk);
    };
    out["psi1"] = weighted(psi1, rho);
    out["grad_psi1"] = weighted(g1, 1.0 + rho);
    out["psi2"] = weighted(psi2, 1.0 + rho);
    out["grad_psi2"] = weighted(g2, 2.0 + rho);
    out["star"] = out["inner"] + out["psi1"] + out["grad_psi1"] + out["psi2"] + out["grad_psi2"];
    return out;
}

DiagnosticsReport diagnose(const ComplexField& u, const ModelParams& params, OpTag tag, const ComplexField* V) {
    DiagnosticsReport r;
    EnergyCharge ec = energy_charge(sphere_grid(u));
    r.energy = ec.energy;
    r.charge = ec.charge;
    r.bogomolny_margin = ec.energy - 8.0 * std::numbers::pi * std::abs(ec.charge);
    r.vortices = detect_vortices(u);
    r.total_winding = total_winding(u);
    ComplexField S = apply_S(u, tag, params);
    r.residuals["S_l2"] = discrete_norm(S, 2);
    r.residuals["S_sup"] = discrete_norm(S, inf_norm);
    if (V) r.weighted_norms = corrector_norms(u, *V, params);
    return r;
}

} // namespace vortex
