#pragma once
#include "eqcavity/quadcheck.hpp"

namespace eqcavity {

enum class MapFamily { AREA_NODE_OFFORIGIN, BOUNDARY_XI_NONZERO, BOUNDARY_XI_ZERO };

// One-point quadrature-domain map families. p is the measure half-exponent:
// AREA_NODE_OFFORIGIN pairs with |z|^{2p} dA and maps with root exponent
// 1/(p+1); the BOUNDARY families pair with |z|^{-2p} dz and root exponent
// 1/p. Taking the measure exponent as the input avoids the off-by-one
// between the two conventions.
struct ConformalFamily {
    MapFamily kind = MapFamily::AREA_NODE_OFFORIGIN;
    int p = 1;
    cplx scale;               // C (area family) or a (boundary families)
    cplx zeta0;               // |zeta0| < 1
    std::vector<cplx> coeffs; // {} / {b} / {b, c}
};

// Parameter gates: |zeta0| < 1, scale != 0; |a/b| > 1 for
// BOUNDARY_XI_NONZERO; both roots of a + b t + c t^2 strictly outside the
// closed unit disc for BOUNDARY_XI_ZERO. Also verifies at 4096 boundary
// samples that every principal-branch radicand factor stays in the right
// half plane. Throws InvalidParameterError.
void validate(const ConformalFamily& family);

// phi(t) and phi'(t); fractional powers are taken through factored
// principal logarithms, well defined on |t| <= 1 for valid parameters.
std::pair<cplx, cplx> eval_map(const ConformalFamily& family, cplx t);

// image of the unit parameter disc
MappedDisc image_region(const ConformalFamily& family);

// Boundary-sampled univalence test at n >= 1024 points: the curve
// phi(e^{i theta_k}) must have no two non-adjacent samples (cyclic index
// distance > n/64) closer than 1e-9 x diameter, and the winding number of
// phi' along |t| = 1 must be zero (no critical point in the disc).
bool check_univalence(const ConformalFamily& family, int n);

// Quadrature data of the image, recovered from moments rather than assumed:
// for weight_exponent >= 0 the measure is |z|^w dA and
// constant = integral of the weight, node = first moment / constant; for
// weight_exponent < 0 the same quotient is formed for the complex boundary
// measure |z|^w dz. Returns (node, constant).
std::pair<cplx, cplx> extract_node_and_constant(const ConformalFamily& family,
                                                int weight_exponent);

} // namespace eqcavity
