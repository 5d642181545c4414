#include "eqcavity/regions.hpp"

#include <algorithm>
#include <cmath>

namespace eqcavity {

namespace {
constexpr double pi = 3.14159265358979323846;

double winding_number(const std::vector<cplx>& poly, cplx z) {
    double total = 0.0;
    std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
        cplx a = poly[k] - z;
        cplx b = poly[(k + 1) % n] - z;
        total += std::arg(b / a);
    }
    return total / (2.0 * pi);
}

std::vector<cplx> sample_boundary(const Region& region, int n);
} // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::NO_SOURCES: return "NO_SOURCES";
        case Regime::DISJOINT_ROOTS: return "DISJOINT_ROOTS";
        case Regime::CONNECTED_LEMNISCATE: return "CONNECTED_LEMNISCATE";
        case Regime::ANNULUS: return "ANNULUS";
        case Regime::UNSUPPORTED: return "UNSUPPORTED";
    }
    return "?";
}

RootSetClass classify_root_set(cplx center_w, double level, int power) {
    if (!(level > 0.0)) throw InvalidParameterError("classify_root_set: level must be > 0");
    (void)power;
    double a = std::abs(center_w);
    double scale = std::max(a, level);
    if (std::abs(level - a) <= 1e-14 * scale) return RootSetClass::TOUCHES_ORIGIN;
    return level < a ? RootSetClass::DISJOINT_BRANCHES
                     : RootSetClass::CONNECTED_CONTAINS_ORIGIN;
}

cplx branch_root(cplx w, cplx rep, int power) {
    if (power == 1) return w;
    cplx repp = std::pow(rep, power);
    return rep * std::exp(std::log(w / repp) / static_cast<double>(power));
}

bool contains(const Region& region, cplx z) {
    if (std::holds_alternative<Disc>(region)) {
        const auto& d = std::get<Disc>(region);
        return std::abs(z - d.center) < d.radius;
    }
    if (std::holds_alternative<Annulus>(region)) {
        const auto& a = std::get<Annulus>(region);
        double s = std::abs(z - a.center);
        return s > a.inner && s < a.outer;
    }
    if (std::holds_alternative<PowerLemniscate>(region)) {
        const auto& lem = std::get<PowerLemniscate>(region);
        cplx w = std::pow(z, lem.power);
        if (!(std::abs(w - lem.center_w) < lem.level)) return false;
        if (!lem.representative) return true;
        // same branch as the representative: z must be the seeded root of w,
        // not one of its rotations by the p-th roots of unity
        cplx zeta = branch_root(w, *lem.representative, lem.power);
        double turns = lem.power * std::arg(z / zeta) / (2.0 * pi);
        return std::lround(turns) == 0;
    }
    if (std::holds_alternative<MappedDisc>(region)) {
        auto poly = sample_boundary(region, 512);
        return std::lround(winding_number(poly, z)) == 1;
    }
    const auto& bc = std::get<BoundaryCurve>(region);
    return std::lround(winding_number(bc.points, z)) == 1;
}

bool support_contains(const SupportDescription& s, cplx z) {
    if (!(std::abs(z - s.base.center) < s.base.radius)) return false;
    for (const auto& cav : s.cavities)
        if (contains(cav, z)) return false;
    return true;
}

std::vector<BoundarySample> boundary_points(const Region& region, int n) {
    if (n < 8) throw InvalidParameterError("boundary_points: n must be >= 8");
    std::vector<BoundarySample> out(n);
    double dth = 2.0 * pi / n;

    if (std::holds_alternative<Disc>(region)) {
        const auto& d = std::get<Disc>(region);
        for (int k = 0; k < n; ++k) {
            cplx e = std::polar(1.0, dth * k);
            out[k] = {d.center + d.radius * e, cplx(0.0, d.radius) * e};
        }
        return out;
    }
    if (std::holds_alternative<Annulus>(region)) {
        throw InvalidParameterError(
            "boundary_points: annulus boundary is two circles; use support_boundaries");
    }
    if (std::holds_alternative<PowerLemniscate>(region)) {
        const auto& lem = std::get<PowerLemniscate>(region);
        RootSetClass cls = classify_root_set(lem.center_w, lem.level, lem.power);
        if (cls == RootSetClass::TOUCHES_ORIGIN)
            throw DegenerateRegionError("boundary_points: lemniscate boundary has a corner at 0");
        if (lem.representative) {
            if (cls != RootSetClass::DISJOINT_BRANCHES && lem.power > 1)
                throw InvalidParameterError("boundary_points: branch tag on a connected lemniscate");
            for (int k = 0; k < n; ++k) {
                cplx dw = std::polar(lem.level, dth * k);
                cplx w = lem.center_w + dw;
                cplx z = branch_root(w, *lem.representative, lem.power);
                out[k] = {z, z * cplx(0.0, 1.0) * dw / (static_cast<double>(lem.power) * w)};
            }
            return out;
        }
        if (cls == RootSetClass::DISJOINT_BRANCHES)
            throw InvalidParameterError(
                "boundary_points: disjoint lemniscate splits into p branch curves");
        // star-shaped about 0: on the ray of angle theta, s^p solves
        // u^2 - 2 b u + |c|^2 - r^2 = 0 with b = Re(conj(c) e^{i p theta})
        double p = lem.power;
        double c2 = std::norm(lem.center_w), r2 = lem.level * lem.level;
        for (int k = 0; k < n; ++k) {
            double th = dth * k;
            cplx cw = std::conj(lem.center_w) * std::polar(1.0, p * th);
            double b = cw.real();
            double bp = -p * cw.imag();
            double root = std::sqrt(b * b + r2 - c2);
            double u = b + root;
            double up = bp * (1.0 + b / root);
            double s = std::pow(u, 1.0 / p);
            double sp = s / (p * u) * up;
            cplx e = std::polar(1.0, th);
            out[k] = {s * e, (sp + cplx(0.0, 1.0) * s) * e};
        }
        return out;
    }
    if (std::holds_alternative<MappedDisc>(region)) {
        const auto& m = std::get<MappedDisc>(region);
        for (int k = 0; k < n; ++k) {
            cplx dt = std::polar(m.param_radius, dth * k);
            out[k] = {m.map(m.param_center + dt),
                      m.dmap(m.param_center + dt) * cplx(0.0, 1.0) * dt};
        }
        return out;
    }
    const auto& bc = std::get<BoundaryCurve>(region);
    int m = static_cast<int>(bc.points.size());
    if (m < n || m % n != 0)
        throw InvalidParameterError("boundary_points: polyline size must be a multiple of n");
    int stride = m / n;
    double dthm = 2.0 * pi / m;
    for (int k = 0; k < n; ++k) {
        int i = k * stride;
        cplx prev = bc.points[(i + m - 1) % m], next = bc.points[(i + 1) % m];
        out[k] = {bc.points[i], (next - prev) / (2.0 * dthm)};
    }
    return out;
}

std::vector<std::vector<BoundarySample>> support_boundaries(const SupportDescription& s, int n) {
    std::vector<std::vector<BoundarySample>> curves;
    curves.push_back(boundary_points(Region(s.base), n));
    for (const auto& cav : s.cavities) {
        auto fwd = boundary_points(cav, n);
        std::vector<BoundarySample> rev(n);
        for (int k = 0; k < n; ++k) {
            const auto& src = fwd[(n - k) % n];
            rev[k] = {src.point, -src.velocity};
        }
        curves.push_back(std::move(rev));
    }
    return curves;
}

double cavity_mass_closed(const FieldSpec& field, const PowerLemniscate& region) {
    double amp = 2.0 * field.strength * (1.0 + field.q_total()) * region.level * region.level;
    return region.representative ? amp : region.power * amp;
}

namespace {
std::vector<cplx> sample_boundary(const Region& region, int n) {
    auto bs = boundary_points(region, n);
    std::vector<cplx> pts(bs.size());
    for (std::size_t i = 0; i < bs.size(); ++i) pts[i] = bs[i].point;
    return pts;
}
} // namespace

double region_diameter(const Region& region) {
    if (std::holds_alternative<Disc>(region)) return 2.0 * std::get<Disc>(region).radius;
    if (std::holds_alternative<Annulus>(region)) return 2.0 * std::get<Annulus>(region).outer;
    std::vector<cplx> pts;
    if (std::holds_alternative<BoundaryCurve>(region))
        pts = std::get<BoundaryCurve>(region).points;
    else
        pts = sample_boundary(region, 256);
    double xlo = pts[0].real(), xhi = xlo, ylo = pts[0].imag(), yhi = ylo;
    for (const auto& z : pts) {
        xlo = std::min(xlo, z.real());
        xhi = std::max(xhi, z.real());
        ylo = std::min(ylo, z.imag());
        yhi = std::max(yhi, z.imag());
    }
    return std::hypot(xhi - xlo, yhi - ylo);
}

} // namespace eqcavity
