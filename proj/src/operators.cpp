#include "vortex/operators.hpp"

#include "stencil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vortex {

OpCoefficients op_coefficients(OpTag tag, const ModelParams& p) {
    double a = eps_factor(p);
    switch (tag) {
    case OpTag::S0: return {};
    case OpTag::S1: return {a, 0.0, false};
    case OpTag::S2: return {a, p.kappa * a, false};
    case OpTag::S3: return {a, 0.0, true};
    case OpTag::S4: return {a, p.kappa * a, true};
    }
    throw std::runtime_error("unknown operator tag");
}

OpTag default_tag(Regime r) {
    switch (r) {
    case Regime::pair_wm: return OpTag::S1;
    case Regime::pair_sch: return OpTag::S2;
    case Regime::ring_wm: return OpTag::S3;
    case Regime::ring_sch: return OpTag::S4;
    }
    throw std::runtime_error("unknown regime");
}

std::string tag_name(OpTag tag) {
    static const char* names[] = {"S0", "S1", "S2", "S3", "S4"};
    return names[static_cast<int>(tag)];
}

OpTag parse_tag(const std::string& name) {
    for (OpTag t : {OpTag::S0, OpTag::S1, OpTag::S2, OpTag::S3, OpTag::S4})
        if (tag_name(t) == name) return t;
    throw std::runtime_error("unknown operator tag '" + name + "'");
}

void check_tag(OpTag tag, Symmetry symmetry) {
    bool ring_tag = tag == OpTag::S3 || tag == OpTag::S4;
    bool pair_tag = tag == OpTag::S1 || tag == OpTag::S2;
    if ((ring_tag && symmetry != Symmetry::ring) || (pair_tag && symmetry != Symmetry::pair))
        throw std::runtime_error("operator " + tag_name(tag) + " does not match the grid symmetry");
}

ComplexField apply_S(const ComplexField& u, OpTag tag, const ModelParams& params) {
    check_tag(tag, u.spec.symmetry);
    OpCoefficients k = op_coefficients(tag, params);
    const GridSpec& g = u.spec;
    ComplexField out(g);
    for (int i = 0; i + 1 < g.n1; ++i) {
        for (int j = 0; j + 1 < g.n2; ++j) {
            out(i, j) = detail::node_S(detail::gather(u, i, j), g.h1, g.h2, g.x1(i), i == 0, k);
        }
    }
    return out;
}

std::vector<cplx> apply_S0_lattice(const std::vector<cplx>& u, int n1, int n2, double h1, double h2) {
    if (n1 < 3 || n2 < 3 || u.size() != static_cast<std::size_t>(n1) * n2)
        throw std::runtime_error("apply_S0_lattice: lattice size mismatch");
    std::vector<cplx> out(u.size());
    auto at = [&](int i, int j) { return u[static_cast<std::size_t>(i) * n2 + j]; };
    for (int i = 1; i + 1 < n1; ++i) {
        for (int j = 1; j + 1 < n2; ++j) {
            detail::Stencil st{at(i, j), at(i + 1, j), at(i - 1, j), at(i, j + 1), at(i, j - 1)};
            out[static_cast<std::size_t>(i) * n2 + j] = detail::node_S(st, h1, h2, 0.0, false, {});
        }
    }
    return out;
}

ComplexField linearize_apply(const ComplexField& u, const ComplexField& v, OpTag tag, const ModelParams& params) {
    double nu = 0.0, nv = 0.0;
    for (cplx z : u.data) nu = std::max(nu, std::abs(z));
    for (cplx z : v.data) nv = std::max(nv, std::abs(z));
    if (nv == 0.0) throw std::runtime_error("linearize_apply: zero direction");
    double delta = 1e-6 * std::max(1.0, nu) / std::max(1e-12, nv);
    ComplexField up = u, um = u;
    for (std::size_t k = 0; k < u.data.size(); ++k) {
        up.data[k] += delta * v.data[k];
        um.data[k] -= delta * v.data[k];
    }
    ComplexField sp = apply_S(up, tag, params), sm = apply_S(um, tag, params);
    ComplexField out(u.spec);
    for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] = (sp.data[k] - sm.data[k]) / (2.0 * delta);
    return out;
}

} // namespace vortex
