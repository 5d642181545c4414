#pragma once
#include "eqcavity/regions.hpp"

namespace eqcavity {

// S_Q = D_R(0), R = (2pC)^(-1/(2p))
Disc support_base(double C, int p);
// C_Q = 1/(2p) - ln R
double frostman_constant(double C, int p);

// Closed-form S_V construction. Dispatch:
//   no sources            -> NO_SOURCES
//   one source at 0       -> ANNULUS, hole radius (q/(2pC(1+q)))^(1/(2p))
//   one source z0 != 0    -> branch cavity (disjoint) or connected lemniscate,
//                            level r = sqrt(q/(2C(1+q)))
//   p equal sources at the p-th roots of unity -> Cassini set, level
//                            T = sqrt(q/(2C(1+pq)))
//   n sources, branches disjoint and contained -> union of branch cavities,
//                            r_j = sqrt(q_j/(2C(1+q_total)))
//   anything else         -> UNSUPPORTED (empty cavities)
// Throws InvalidSourceError if a source lies on or outside the base circle.
SupportDescription build_support(const FieldSpec& field);

// potential of mu_Q: 1/(2p) - ln R - C|z|^{2p} inside D_R, ln(1/|z|) outside
double radial_potential(double C, int p, cplx z);

// excess weighted potential inside a swept disc in the w = z^p plane:
// q ln(r/|wz-w0|) + (q/2)(-1 + |wz-w0|^2/r^2); 0 when not inside
double F2_closed(double q, double r, cplx w0, cplx wz, bool inside);

// same role for the annulus hole of radius rho at a source at the origin:
// q ln(rho/s) - q/(2p) + (1+q) C s^{2p} for s = |z| < rho
double annulus_F2_closed(double q, double C, int p, double rho, double s);

struct FrostmanReport {
    double constant_estimate = 0.0;        // C_V
    double on_support_max_deviation = 0.0; // max |F - C_V| on S_V
    double exterior_min_margin = 0.0;      // min (F - C_V) outside the base
    double cavity_min_margin = 0.0;        // min (F - C_V) inside cavities
    int samples_on = 0;
    int samples_off = 0;
};

enum class FrostmanMode { CLOSED, NUMERIC };

// Samples F(z) = (1+q)[radial_potential + Q] + sum_j [q_j ln 1/|z-z_j| -
// U_cavity_j(z)] on quasi-uniform (Halton) points of S_V and off-support
// points; NUMERIC evaluates cavity potentials by log_potential_numeric,
// CLOSED by the F2/mean-value forms above.
FrostmanReport frostman_verify(const FieldSpec& field, const SupportDescription& support,
                               int n_on, int n_off, FrostmanMode mode);

// pointwise weighted potential used by frostman_verify; exposed for tests
double frostman_F(const FieldSpec& field, const SupportDescription& support, cplx z,
                  FrostmanMode mode);

// Q(z) = C |phi(z)|^{2p} with polynomial phi; the cavity is
// psi(D_r(phi^p(z0))), psi the local inverse of phi^p, r = sqrt(q/(2C(1+q))).
struct LocalStructure {
    std::vector<cplx> phi; // ascending coefficients
    double strength;       // C
    int halfdegree;        // p
    PointSource source;
};

// Returns the cavity as a MappedDisc whose map is Newton continuation of the
// local inverse; throws NewtonDivergenceError (with the last valid theta) if
// q is too large for the inverse to extend over the whole parameter disc.
Region cavity_general(const LocalStructure& local);

} // namespace eqcavity
