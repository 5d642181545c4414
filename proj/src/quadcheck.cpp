#include "eqcavity/quadcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "eqcavity/parallel.hpp"

namespace eqcavity {

namespace {
constexpr double pi = 3.14159265358979323846;

// z^k for integer k >= 0 without the pow(0,0) NaN
cplx ipow(cplx z, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

// trapezoid contour sums of f(z) dz together with the absolute-mass scale
struct ContourMoments {
    std::vector<cplx> vals;
    std::vector<double> scales;
    double est = 0.0;
};

template <class FK>
ContourMoments contour_moments(const Region& domain, int max_degree, FK&& fk, int n) {
    auto pass = [&](int m) {
        auto bs = boundary_points(domain, m);
        ContourMoments cm;
        cm.vals.resize(max_degree + 1);
        cm.scales.resize(max_degree + 1);
        double dth = 2.0 * pi / m;
        for (int k = 0; k <= max_degree; ++k) {
            struct A {
                cplx v{};
                double a = 0.0;
                A& operator+=(const A& o) {
                    v += o.v;
                    a += o.a;
                    return *this;
                }
                A operator+(const A& o) const {
                    A r = *this;
                    r += o;
                    return r;
                }
            };
            A acc = map_sum<A>(static_cast<std::size_t>(m), [&](std::size_t i) {
                cplx term = fk(bs[i].point, k) * bs[i].velocity * dth;
                return A{term, std::abs(term)};
            });
            cm.vals[k] = acc.v;
            cm.scales[k] = acc.a;
        }
        return cm;
    };
    ContourMoments coarse = pass(n);
    ContourMoments fine = pass(2 * n);
    for (int k = 0; k <= max_degree; ++k)
        fine.est = std::max(fine.est, std::abs(fine.vals[k] - coarse.vals[k]));
    return fine;
}

// solve the small complex Vandermonde system V c = b, V_{kj} = nodes[j]^k
std::vector<cplx> fit_coefficients(const std::vector<cplx>& nodes, const std::vector<cplx>& b) {
    std::size_t m = nodes.size();
    std::vector<std::vector<cplx>> A(m, std::vector<cplx>(m + 1));
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) A[k][j] = ipow(nodes[j], static_cast<int>(k));
        A[k][m] = b[k];
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-12) throw SingularFitError("degenerate quadrature nodes");
        std::swap(A[col], A[piv]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            cplx f = A[r][col] / A[col][col];
            for (std::size_t c = col; c <= m; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::vector<cplx> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = A[j][m] / A[j][j];
    return c;
}

double boundary_abs_max(const Region& domain) {
    auto bs = boundary_points(domain, 256);
    double r = 0.0;
    for (const auto& b : bs) r = std::max(r, std::abs(b.point));
    return r;
}

void fill_residuals(QuadratureReport& rep, double mass_scale, double rho_max) {
    std::size_t n = rep.lhs.size();
    rep.abs_residual.resize(n);
    rep.rel_residual.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        rep.abs_residual[k] = std::abs(rep.lhs[k] - rep.rhs[k]);
        double scale = std::max({std::abs(rep.lhs[k]), std::abs(rep.rhs[k]),
                                 mass_scale * std::pow(rho_max, rep.degrees[k]), 1e-300});
        rep.rel_residual[k] = rep.abs_residual[k] / scale;
    }
}
} // namespace

double QuadratureReport::max_rel(int from_degree) const {
    double m = 0.0;
    for (std::size_t k = 0; k < degrees.size(); ++k)
        if (degrees[k] >= from_degree) m = std::max(m, rel_residual[k]);
    return m;
}

QuadratureReport check_area_quadrature(const FieldSpec& field, const Region& cavity,
                                       const std::vector<std::pair<cplx, double>>& nodes,
                                       int max_degree, KappaConvention kappa) {
    if (max_degree > 12) throw InvalidParameterError("check_area_quadrature: max_degree <= 12");
    double q = field.q_total();
    double kap = (kappa == KappaConvention::TWO_PI ? 2.0 : 4.0) * pi / (1.0 + q);

    QuadratureReport rep;
    double qsum = 0.0;
    for (const auto& nd : nodes) qsum += nd.second;
    for (int k = 0; k <= max_degree; ++k) {
        auto lhs = integrate_area(
            [&](cplx z) { return laplacian_Q(field, z) * ipow(z, k); }, cavity, 1e-10);
        cplx rhs = 0.0;
        for (const auto& nd : nodes) rhs += nd.second * ipow(nd.first, k);
        rhs *= kap;
        rep.degrees.push_back(k);
        rep.lhs.push_back(lhs.value);
        rep.rhs.push_back(rhs);
    }
    fill_residuals(rep, std::abs(rep.lhs[0]), boundary_abs_max(cavity));
    if (qsum > 0.0) rep.fitted_coefficients.push_back(rep.lhs[0] / qsum);
    {
        char buf[256];
        double mass = std::abs(rep.lhs[0]);
        std::snprintf(buf, sizeof buf,
                      "degree-0 lhs=%.9g; rhs(2pi/(1+q))=%.9g; rhs(4pi/(1+q))=%.9g; "
                      "matching constant: %s",
                      mass, 2.0 * pi / (1.0 + q) * qsum, 4.0 * pi / (1.0 + q) * qsum,
                      std::abs(mass - 2.0 * pi / (1.0 + q) * qsum) <
                              std::abs(mass - 4.0 * pi / (1.0 + q) * qsum)
                          ? "2pi/(1+q)"
                          : "4pi/(1+q)");
        rep.note = buf;
    }
    return rep;
}

QuadratureReport check_weighted_area_quadrature(const Region& domain, int weight_exponent,
                                                const std::vector<cplx>& nodes,
                                                int max_degree) {
    if (max_degree > 12)
        throw InvalidParameterError("check_weighted_area_quadrature: max_degree <= 12");
    std::vector<cplx> moments(max_degree + 1);
    for (int k = 0; k <= max_degree; ++k)
        moments[k] = integrate_area(
                         [&](cplx z) {
                             return std::pow(std::abs(z), weight_exponent) * ipow(z, k);
                         },
                         domain, 1e-10)
                         .value;

    QuadratureReport rep;
    std::vector<cplx> fitb(moments.begin(), moments.begin() + nodes.size());
    rep.fitted_coefficients = fit_coefficients(nodes, fitb);
    for (int k = 0; k <= max_degree; ++k) {
        cplx rhs = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            rhs += rep.fitted_coefficients[j] * ipow(nodes[j], k);
        rep.degrees.push_back(k);
        rep.lhs.push_back(moments[k]);
        rep.rhs.push_back(rhs);
    }
    fill_residuals(rep, std::abs(moments[0]), boundary_abs_max(domain));
    return rep;
}

QuadratureReport check_boundary_quadrature(const Region& domain, int p,
                                           const std::vector<cplx>& nodes, int max_degree) {
    if (max_degree > 12)
        throw InvalidParameterError("check_boundary_quadrature: max_degree <= 12");
    {
        auto bs = boundary_points(domain, 256);
        double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
        for (const auto& b : bs) {
            rmin = std::min(rmin, std::abs(b.point));
            rmax = std::max(rmax, std::abs(b.point));
        }
        if (rmin < 1e-12 * rmax)
            throw OriginOnBoundaryError("check_boundary_quadrature: 0 on the boundary");
    }
    auto fk = [&](cplx z, int k) {
        return ipow(z, k) * std::pow(std::abs(z), -2.0 * p);
    };
    ContourMoments cm = contour_moments(domain, max_degree, fk, 1024);

    QuadratureReport rep;
    if (!nodes.empty()) {
        std::vector<cplx> fitb(cm.vals.begin(), cm.vals.begin() + nodes.size());
        rep.fitted_coefficients = fit_coefficients(nodes, fitb);
    }
    for (int k = 0; k <= max_degree; ++k) {
        cplx rhs = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            rhs += rep.fitted_coefficients[j] * ipow(nodes[j], k);
        rep.degrees.push_back(k);
        rep.lhs.push_back(cm.vals[k]);
        rep.rhs.push_back(rhs);
        rep.abs_residual.push_back(std::abs(cm.vals[k] - rhs));
        rep.rel_residual.push_back(rep.abs_residual.back() /
                                   std::max(cm.scales[k], 1e-300));
    }
    return rep;
}

QuadratureReport check_inverted_exterior(const FieldSpec& field,
                                         const SupportDescription& support, cplx alpha,
                                         int max_degree) {
    if (max_degree > 12)
        throw InvalidParameterError("check_inverted_exterior: max_degree <= 12");
    if (!support_contains(support, alpha))
        throw AlphaOutsideError("check_inverted_exterior: alpha not inside S_V");
    for (const auto& s : field.sources)
        if (support_contains(support, s.location))
            throw InvalidSourceError("check_inverted_exterior: source inside S_V");

    // In the z variable the integrand h(t) t^{-1} dQ(t^{-1}+alpha) dt becomes
    // -(z-alpha)^{-(k+1)} dQ(z) dz; the inversion reverses orientation, so
    // the reported value is the positively-traversed z integral.
    auto fk = [&](cplx z, int k) {
        return wirtinger_dQ(field, z) / ipow(z - alpha, k + 1);
    };
    ContourMoments cm = contour_moments(Region(support.base), max_degree, fk, 1024);

    QuadratureReport rep;
    if (!field.sources.empty()) {
        std::vector<cplx> tn;
        for (const auto& s : field.sources) tn.push_back(1.0 / (s.location - alpha));
        std::vector<cplx> fitb(cm.vals.begin(), cm.vals.begin() + tn.size());
        rep.fitted_coefficients = fit_coefficients(tn, fitb);
        for (int k = 0; k <= max_degree; ++k) {
            cplx rhs = 0.0;
            for (std::size_t j = 0; j < tn.size(); ++j)
                rhs += rep.fitted_coefficients[j] * ipow(tn[j], k);
            rep.degrees.push_back(k);
            rep.lhs.push_back(cm.vals[k]);
            rep.rhs.push_back(rhs);
            rep.abs_residual.push_back(std::abs(cm.vals[k] - rhs));
            rep.rel_residual.push_back(rep.abs_residual.back() /
                                       std::max(cm.scales[k], 1e-300));
        }
        if (!support.cavities.empty())
            rep.note = "outer boundary only; cavity boundary contributions not included";
        return rep;
    }
    for (int k = 0; k <= max_degree; ++k) {
        rep.degrees.push_back(k);
        rep.lhs.push_back(cm.vals[k]);
        rep.rhs.push_back(0.0);
        rep.abs_residual.push_back(std::abs(cm.vals[k]));
        rep.rel_residual.push_back(std::abs(cm.vals[k]) / std::max(cm.scales[k], 1e-300));
    }
    return rep;
}

} // namespace eqcavity
