#pragma once
#include <string>
#include <utility>

#include "eqcavity/quadrature.hpp"

namespace eqcavity {

struct QuadratureReport {
    std::vector<int> degrees;
    std::vector<cplx> lhs;
    std::vector<cplx> rhs;
    std::vector<double> abs_residual;
    // abs / max(|lhs|, |rhs|, mass * rho_max^degree) so null identities
    // (lhs ~ rhs ~ 0) normalize sensibly
    std::vector<double> rel_residual;
    std::vector<cplx> fitted_coefficients;
    std::string note;

    double max_rel(int from_degree = 0) const;
    bool passed(double tol, int from_degree = 0) const { return max_rel(from_degree) <= tol; }
};

enum class KappaConvention { TWO_PI, FOUR_PI };

// integral over the cavity of DeltaQ h dA vs kappa sum_j q_j h(z_j) for
// h = z^k, k = 0..max_degree; kappa = 2pi/(1+q) (the FOUR_PI variant is a
// deliberate regression guard that fails at degree 0 by a factor of ~2).
// fitted_coefficients[0] reports the best-fit kappa from k=0.
QuadratureReport check_area_quadrature(const FieldSpec& field, const Region& cavity,
                                       const std::vector<std::pair<cplx, double>>& nodes,
                                       int max_degree,
                                       KappaConvention kappa = KappaConvention::TWO_PI);

// fit-then-verify for the plain weighted area measure |z|^weight_exponent dA:
// node coefficients are fitted from the lowest #nodes degrees and the
// remaining degrees are pure checks.
QuadratureReport check_weighted_area_quadrature(const Region& domain, int weight_exponent,
                                                const std::vector<cplx>& nodes, int max_degree);

// contour integrals of z^k |z|^(-2p) dz on the domain boundary; empty nodes
// verifies the null identity, otherwise fit-then-verify as above.
QuadratureReport check_boundary_quadrature(const Region& domain, int p,
                                           const std::vector<cplx>& nodes, int max_degree);

// maps the outer boundary of S_V through t = (z-alpha)^(-1) and integrates
// h(t) t^(-1) dQ(t^(-1)+alpha) dt for h = t^k; null identity when the field
// has no sources, otherwise nodes (z_j-alpha)^(-1) are fitted first.
QuadratureReport check_inverted_exterior(const FieldSpec& field,
                                         const SupportDescription& support, cplx alpha,
                                         int max_degree);

} // namespace eqcavity
