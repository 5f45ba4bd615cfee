#pragma once

#include "vortex/fields.hpp"
#include "vortex/params.hpp"

#include <string>
#include <vector>

namespace vortex {

enum class OpTag { S0, S1, S2, S3, S4 };

// Weights of the lower-order terms: S = S0 + q2*Q2 + t2*T2 (+ H1 if h1).
struct OpCoefficients {
    double q2 = 0.0;
    double t2 = 0.0;
    bool h1 = false;
};

OpCoefficients op_coefficients(OpTag tag, const ModelParams& p);
OpTag default_tag(Regime r);
std::string tag_name(OpTag tag);
OpTag parse_tag(const std::string& name);

// Throws when S1/S2 meet a RING grid or S3/S4 a PAIR grid.
void check_tag(OpTag tag, Symmetry symmetry);

// S_tag[u] at every node off the outer boundary layer (which stays zero).
// grad u . grad u is the bilinear (d1 u)^2 + (d2 u)^2.
ComplexField apply_S(const ComplexField& u, OpTag tag, const ModelParams& params);

// Symmetric difference quotient of apply_S in direction v.
ComplexField linearize_apply(const ComplexField& u, const ComplexField& v, OpTag tag,
                             const ModelParams& params);

// S0 on a plain row-major n1 x n2 lattice without any symmetry, for
// configurations such as a single vortex that the quarter grids cannot hold.
// Boundary nodes are left at zero.
std::vector<cplx> apply_S0_lattice(const std::vector<cplx>& u, int n1, int n2, double h1, double h2);

} // namespace vortex
