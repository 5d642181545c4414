#pragma once
#include <functional>

#include "eqcavity/regions.hpp"

namespace eqcavity {

struct IntegrationResult {
    cplx value;
    double error_estimate = 0.0;
    long long evaluations = 0;
};

using Integrand = std::function<cplx(cplx)>;

// Area integral over a region. Routing: disc/annulus -> polar Gauss x
// trapezoid; branch root-of-disc -> pullback w=z^p onto D_r(c); connected
// lemniscate -> star-shaped radial rule; mapped disc -> unit-parameter
// pullback with |phi'|^2; boundary curve -> adaptive quadtree (lower
// accuracy, reflected in error_estimate). Throws ToleranceNotMetError with
// the best value when the doubling loop fails to reach rel_tol.
IntegrationResult integrate_area(const Integrand& f, const Region& region, double rel_tol);
// base disc minus cavities
IntegrationResult integrate_area(const Integrand& f, const SupportDescription& s, double rel_tol);

// Trapezoid contour integral of f(z) dz on boundary_points(region, n);
// spectrally accurate on smooth curves, error estimated by doubling n.
// Annulus = outer circle (positive) plus inner circle (negative).
IntegrationResult integrate_boundary(const Integrand& f, const Region& region, int n);

// integral of ln(1/|w-z|) * density(w) over the region; the log singularity
// is handled by a singularity-centered polar rule (Duffy radial substitution)
// or, for boundary-curve regions, by kernel clipping at 1e-3 x diameter.
double log_potential_numeric(const std::function<double(cplx)>& density, const Region& region,
                             cplx z, double rel_tol);
// density (1+q) * laplacian_Q / (2 pi); lemniscate cavities integrate in the
// w = z^p plane where this density pushes forward to a uniform one.
double log_potential_numeric(const FieldSpec& field, const Region& region, cplx z,
                             double rel_tol);

// Gauss-Legendre nodes/weights on [0,1] (cached); exposed for reuse.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

} // namespace eqcavity
