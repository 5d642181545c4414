#include "eqcavity/conformal.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "eqcavity/parallel.hpp"

namespace eqcavity {

namespace {
constexpr double pi = 3.14159265358979323846;

// roots of a + b t + c t^2, c != 0, without subtractive cancellation
std::array<cplx, 2> quad_roots(cplx a, cplx b, cplx c) {
    cplx d = std::sqrt(b * b - 4.0 * a * c);
    cplx qq = (std::abs(b + d) >= std::abs(b - d)) ? -0.5 * (b + d) : -0.5 * (b - d);
    if (std::abs(qq) == 0.0) return {cplx(0.0), cplx(0.0)};
    return {qq / c, a / qq};
}

void validate_gates(const ConformalFamily& f) {
    if (f.p < 1) throw InvalidParameterError("conformal: p must be a positive integer");
    if (std::abs(f.zeta0) >= 1.0) throw InvalidParameterError("conformal: |zeta0| must be < 1");
    if (std::abs(f.scale) == 0.0) throw InvalidParameterError("conformal: zero scale");
    switch (f.kind) {
    case MapFamily::AREA_NODE_OFFORIGIN:
        if (!f.coeffs.empty())
            throw InvalidParameterError("conformal: area family takes no extra coefficients");
        break;
    case MapFamily::BOUNDARY_XI_NONZERO:
        if (f.coeffs.size() != 1)
            throw InvalidParameterError("conformal: nonzero-xi family needs one coefficient b");
        if (std::abs(f.coeffs[0]) >= std::abs(f.scale))
            throw InvalidParameterError("conformal: nonzero-xi family requires |a/b| > 1");
        break;
    case MapFamily::BOUNDARY_XI_ZERO: {
        if (f.coeffs.size() != 2 || std::abs(f.coeffs[1]) == 0.0)
            throw InvalidParameterError("conformal: zero-xi family needs coefficients b, c != 0");
        auto r = quad_roots(f.scale, f.coeffs[0], f.coeffs[1]);
        if (std::abs(r[0]) <= 1.0 || std::abs(r[1]) <= 1.0)
            throw InvalidParameterError(
                "conformal: zero-xi family requires both numerator roots outside the disc");
        break;
    }
    }
}

// the factors whose principal logs build phi; all must stay in Re > 0
std::vector<cplx> radicand_factors(const ConformalFamily& f, cplx t) {
    std::vector<cplx> v;
    v.push_back(1.0 - t * std::conj(f.zeta0));
    if (f.kind == MapFamily::BOUNDARY_XI_NONZERO) {
        v.push_back(1.0 + (f.coeffs[0] / f.scale) * t);
    } else if (f.kind == MapFamily::BOUNDARY_XI_ZERO) {
        auto r = quad_roots(f.scale, f.coeffs[0], f.coeffs[1]);
        v.push_back(1.0 - t / r[0]);
        v.push_back(1.0 - t / r[1]);
    }
    return v;
}
} // namespace

void validate(const ConformalFamily& family) {
    validate_gates(family);
    for (int k = 0; k < 4096; ++k) {
        double th = 2.0 * pi * k / 4096;
        for (cplx fac : radicand_factors(family, std::polar(1.0, th)))
            if (fac.real() <= 0.0)
                throw InvalidParameterError("conformal: radicand leaves the right half plane");
    }
}

std::pair<cplx, cplx> eval_map(const ConformalFamily& family, cplx t) {
    validate_gates(family);
    if (std::abs(t) > 1.0 + 1e-12)
        throw InvalidParameterError("conformal: eval_map requires |t| <= 1");

    cplx zb = std::conj(family.zeta0);
    cplx u = 1.0 - t * zb;
    switch (family.kind) {
    case MapFamily::AREA_NODE_OFFORIGIN: {
        double beta = 1.0 / (family.p + 1);
        cplx root = std::exp(-beta * std::log(u));
        cplx phi = family.scale * t * root;
        cplx dphi = family.scale * root * (1.0 + beta * t * zb / u);
        return {phi, dphi};
    }
    case MapFamily::BOUNDARY_XI_NONZERO: {
        cplx a = family.scale, b = family.coeffs[0];
        cplx v = 1.0 + (b / a) * t;
        cplx W = std::exp((std::log(a) + std::log(v) - std::log(u)) / double(family.p));
        cplx logd = (b / a) / v + zb / u;
        return {t * W, W * (1.0 + t * logd / double(family.p))};
    }
    case MapFamily::BOUNDARY_XI_ZERO: {
        cplx a = family.scale;
        auto r = quad_roots(a, family.coeffs[0], family.coeffs[1]);
        cplx v1 = 1.0 - t / r[0], v2 = 1.0 - t / r[1];
        cplx W = std::exp((std::log(a) + std::log(v1) + std::log(v2) - std::log(u)) /
                          double(family.p));
        cplx logd = -(1.0 / r[0]) / v1 - (1.0 / r[1]) / v2 + zb / u;
        return {t * W, W * (1.0 + t * logd / double(family.p))};
    }
    }
    throw InvalidParameterError("conformal: unknown family kind");
}

MappedDisc image_region(const ConformalFamily& family) {
    validate(family);
    return MappedDisc{[family](cplx t) { return eval_map(family, t).first; },
                      [family](cplx t) { return eval_map(family, t).second; }, cplx(0.0), 1.0};
}

bool check_univalence(const ConformalFamily& family, int n) {
    if (n < 1024) throw InvalidParameterError("check_univalence: n >= 1024 required");
    validate(family);

    std::vector<cplx> z(n), d(n);
    map_fill(z, [&](std::size_t k) {
        return eval_map(family, std::polar(1.0, 2.0 * pi * double(k) / n)).first;
    });
    map_fill(d, [&](std::size_t k) {
        return eval_map(family, std::polar(1.0, 2.0 * pi * double(k) / n)).second;
    });

    double xlo = z[0].real(), xhi = xlo, ylo = z[0].imag(), yhi = ylo;
    for (cplx w : z) {
        xlo = std::min(xlo, w.real());
        xhi = std::max(xhi, w.real());
        ylo = std::min(ylo, w.imag());
        yhi = std::max(yhi, w.imag());
    }
    double diam = std::hypot(xhi - xlo, yhi - ylo);
    if (diam == 0.0) return false;

    // self-intersection proxy: near-coincident samples that are not
    // parameter-adjacent (window n/64 so curvature crowding is not flagged)
    int window = std::max(1, n / 64);
    double thresh = 1e-9 * diam;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int gap = std::min(j - i, n - (j - i));
            if (gap <= window) continue;
            if (std::abs(z[i] - z[j]) < thresh) return false;
        }
    }

    // phi' must not wind about 0 (a critical point inside would make the
    // boundary trace non-simple under any perturbation)
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx a = d[k], b = d[(k + 1) % n];
        if (std::abs(a) == 0.0 || std::abs(b) == 0.0) return false;
        total += std::arg(b / a);
    }
    return std::lround(total / (2.0 * pi)) == 0;
}

std::pair<cplx, cplx> extract_node_and_constant(const ConformalFamily& family,
                                                int weight_exponent) {
    MappedDisc omega = image_region(family);
    if (weight_exponent >= 0) {
        cplx mass = integrate_area(
                        [&](cplx z) { return cplx(std::pow(std::abs(z), weight_exponent)); },
                        Region(omega), 1e-11)
                        .value;
        cplx m1 = integrate_area(
                      [&](cplx z) { return z * std::pow(std::abs(z), weight_exponent); },
                      Region(omega), 1e-11)
                      .value;
        return {m1 / mass, mass};
    }
    cplx mass = integrate_boundary(
                    [&](cplx z) { return cplx(std::pow(std::abs(z), weight_exponent)); },
                    Region(omega), 2048)
                    .value;
    cplx m1 = integrate_boundary(
                  [&](cplx z) { return z * std::pow(std::abs(z), weight_exponent); },
                  Region(omega), 2048)
                  .value;
    return {m1 / mass, mass};
}

} // namespace eqcavity
