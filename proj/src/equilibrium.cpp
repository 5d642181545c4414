#include "eqcavity/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqcavity/parallel.hpp"
#include "eqcavity/quadrature.hpp"

namespace eqcavity {

namespace {
constexpr double pi = 3.14159265358979323846;
constexpr double inf = std::numeric_limits<double>::infinity();

double halton(std::size_t index, int base) {
    double f = 1.0, r = 0.0;
    std::size_t i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}
} // namespace

Disc support_base(double C, int p) {
    if (!(C > 0.0) || p < 1) throw InvalidParameterError("support_base: need C > 0, p >= 1");
    return {cplx(0.0, 0.0), std::pow(2.0 * p * C, -1.0 / (2.0 * p))};
}

double frostman_constant(double C, int p) {
    return 1.0 / (2.0 * p) - std::log(support_base(C, p).radius);
}

double radial_potential(double C, int p, cplx z) {
    double R = support_base(C, p).radius;
    double s = std::abs(z);
    if (s > R) return -std::log(s);
    return 1.0 / (2.0 * p) - std::log(R) - C * std::pow(s, 2.0 * p);
}

double F2_closed(double q, double r, cplx w0, cplx wz, bool inside) {
    if (!(r > 0.0)) throw InvalidParameterError("F2_closed: r must be > 0");
    if (!inside) return 0.0;
    double d = std::abs(wz - w0);
    if (d == 0.0) return inf;
    return q * std::log(r / d) + 0.5 * q * (-1.0 + d * d / (r * r));
}

double annulus_F2_closed(double q, double C, int p, double rho, double s) {
    if (s >= rho) return 0.0;
    if (s == 0.0) return inf;
    return q * std::log(rho / s) - q / (2.0 * p) + (1.0 + q) * C * std::pow(s, 2.0 * p);
}

namespace {

bool is_roots_of_unity_pattern(const FieldSpec& f) {
    int p = f.halfdegree;
    if (static_cast<int>(f.sources.size()) != p || p < 2) return false;
    double q0 = f.sources[0].intensity;
    for (const auto& s : f.sources)
        if (std::abs(s.intensity - q0) > 1e-12 * q0) return false;
    std::vector<bool> used(p, false);
    for (const auto& s : f.sources) {
        bool matched = false;
        for (int k = 0; k < p; ++k) {
            if (used[k]) continue;
            cplx root = std::polar(1.0, 2.0 * pi * k / p);
            if (std::abs(s.location - root) < 1e-12) {
                used[k] = true;
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

} // namespace

SupportDescription build_support(const FieldSpec& field) {
    field.validate();
    Disc base = support_base(field.strength, field.halfdegree);
    double C = field.strength;
    int p = field.halfdegree;
    double q = field.q_total();
    double Rp = std::pow(base.radius, p);

    if (field.sources.empty()) return {base, {}, Regime::NO_SOURCES};

    for (const auto& s : field.sources)
        if (!(std::abs(s.location) < base.radius))
            throw InvalidSourceError("build_support: source on or outside the base circle");

    if (field.sources.size() == 1 && field.sources[0].location == cplx(0.0, 0.0)) {
        double rho = std::pow(q / (2.0 * p * C * (1.0 + q)), 1.0 / (2.0 * p));
        return {base, {Region(Disc{cplx(0.0, 0.0), rho})}, Regime::ANNULUS};
    }

    if (field.sources.size() == 1) {
        cplx z0 = field.sources[0].location;
        cplx w0 = std::pow(z0, p);
        double r = std::sqrt(q / (2.0 * C * (1.0 + q)));
        RootSetClass cls = classify_root_set(w0, r, p);
        if (cls == RootSetClass::DISJOINT_BRANCHES && std::abs(w0) + r < Rp)
            return {base, {Region(PowerLemniscate{p, w0, r, z0})}, Regime::DISJOINT_ROOTS};
        if (cls == RootSetClass::CONNECTED_CONTAINS_ORIGIN && r + std::abs(w0) < Rp)
            return {base, {Region(PowerLemniscate{p, w0, r, std::nullopt})},
                    Regime::CONNECTED_LEMNISCATE};
        return {base, {}, Regime::UNSUPPORTED};
    }

    if (is_roots_of_unity_pattern(field)) {
        double qj = field.sources[0].intensity;
        double T = std::sqrt(qj / (2.0 * C * (1.0 + p * qj)));
        if (!(1.0 + T < Rp)) return {base, {}, Regime::UNSUPPORTED};
        RootSetClass cls = classify_root_set(cplx(1.0, 0.0), T, p);
        if (cls == RootSetClass::CONNECTED_CONTAINS_ORIGIN)
            return {base, {Region(PowerLemniscate{p, cplx(1.0, 0.0), T, std::nullopt})},
                    Regime::CONNECTED_LEMNISCATE};
        if (cls == RootSetClass::DISJOINT_BRANCHES) {
            SupportDescription s{base, {}, Regime::DISJOINT_ROOTS};
            for (const auto& src : field.sources)
                s.cavities.emplace_back(PowerLemniscate{p, cplx(1.0, 0.0), T, src.location});
            return s;
        }
        return {base, {}, Regime::UNSUPPORTED}; // touches the origin
    }

    // general multi-source: all branches must be well-separated roots of discs
    SupportDescription s{base, {}, Regime::DISJOINT_ROOTS};
    for (const auto& src : field.sources) {
        cplx w0 = std::pow(src.location, p);
        double rj = std::sqrt(src.intensity / (2.0 * C * (1.0 + q)));
        if (classify_root_set(w0, rj, p) != RootSetClass::DISJOINT_BRANCHES ||
            !(std::abs(w0) + rj < Rp))
            return {base, {}, Regime::UNSUPPORTED};
        s.cavities.emplace_back(PowerLemniscate{p, w0, rj, src.location});
    }
    // pairwise disjointness via boundary samples
    std::vector<std::vector<BoundarySample>> bnds;
    for (const auto& cav : s.cavities) bnds.push_back(boundary_points(cav, 256));
    for (std::size_t i = 0; i < bnds.size(); ++i)
        for (std::size_t j = i + 1; j < bnds.size(); ++j) {
            for (const auto& a : bnds[i])
                for (const auto& b : bnds[j])
                    if (std::abs(a.point - b.point) < 1e-9 * base.radius)
                        return {base, {}, Regime::UNSUPPORTED};
            if (contains(s.cavities[j], bnds[i][0].point) ||
                contains(s.cavities[i], bnds[j][0].point))
                return {base, {}, Regime::UNSUPPORTED};
        }
    return s;
}

namespace {

// potential of the swept charge on a connected lemniscate cavity (uniform
// density 2C(1+q)/pi in the w = z^p plane over D_level(center))
double connected_cavity_potential(const FieldSpec& field, const PowerLemniscate& lem, cplx z) {
    double amp = 2.0 * field.strength * (1.0 + field.q_total());
    double r = lem.level;
    cplx wz = std::pow(z, lem.power);
    double d = std::abs(wz - lem.center_w);
    if (d >= r) return amp * r * r * std::log(1.0 / d);
    return amp * (r * r * (std::log(1.0 / r) + 0.5) - 0.5 * d * d);
}

double closed_F(const FieldSpec& field, const SupportDescription& support, cplx z) {
    double q = field.q_total();
    int p = field.halfdegree;
    double F = (1.0 + q) * (radial_potential(field.strength, p, z) + eval_Q(field, z));

    std::vector<bool> consumed(field.sources.size(), false);
    for (const auto& cav : support.cavities) {
        if (std::holds_alternative<Disc>(cav)) {
            // annulus hole; its source sits at the origin
            const auto& hole = std::get<Disc>(cav);
            F += annulus_F2_closed(q, field.strength, p, hole.radius, std::abs(z));
            for (std::size_t j = 0; j < field.sources.size(); ++j)
                if (field.sources[j].location == cplx(0.0, 0.0)) consumed[j] = true;
            continue;
        }
        const auto& lem = std::get<PowerLemniscate>(cav);
        if (lem.representative) {
            // branch cavity paired with the source it contains
            for (std::size_t j = 0; j < field.sources.size(); ++j) {
                if (field.sources[j].location == *lem.representative) {
                    consumed[j] = true;
                    F += F2_closed(field.sources[j].intensity, lem.level, lem.center_w,
                                   std::pow(z, lem.power), contains(cav, z));
                }
            }
            continue;
        }
        // connected cavity: all enclosed sources against the swept potential
        F -= connected_cavity_potential(field, lem, z);
        for (std::size_t j = 0; j < field.sources.size(); ++j) {
            if (contains(cav, field.sources[j].location)) {
                consumed[j] = true;
                cplx d = z - field.sources[j].location;
                if (d == cplx(0.0, 0.0)) return inf;
                F -= field.sources[j].intensity * std::log(std::abs(d));
            }
        }
    }
    for (std::size_t j = 0; j < field.sources.size(); ++j)
        if (!consumed[j]) {
            cplx d = z - field.sources[j].location;
            if (d == cplx(0.0, 0.0)) return inf;
            F -= field.sources[j].intensity * std::log(std::abs(d));
        }
    return F;
}

double numeric_F(const FieldSpec& field, const SupportDescription& support, cplx z) {
    double q = field.q_total();
    double F = (1.0 + q) *
               (radial_potential(field.strength, field.halfdegree, z) + eval_Q(field, z));
    for (const auto& s : field.sources) {
        cplx d = z - s.location;
        if (d == cplx(0.0, 0.0)) return inf;
        F -= s.intensity * std::log(std::abs(d));
    }
    for (const auto& cav : support.cavities)
        F -= log_potential_numeric(field, cav, z, 1e-9);
    return F;
}

} // namespace

double frostman_F(const FieldSpec& field, const SupportDescription& support, cplx z,
                  FrostmanMode mode) {
    return mode == FrostmanMode::CLOSED ? closed_F(field, support, z)
                                        : numeric_F(field, support, z);
}

FrostmanReport frostman_verify(const FieldSpec& field, const SupportDescription& support,
                               int n_on, int n_off, FrostmanMode mode) {
    if (support.regime == Regime::UNSUPPORTED)
        throw UnsupportedRegimeError("frostman_verify: UNSUPPORTED regime");
    double R = support.base.radius;
    double band = 1e-3 * R;

    // cavity boundary samples once, for the exclusion band
    std::vector<std::vector<BoundarySample>> cavb;
    for (const auto& cav : support.cavities) cavb.push_back(boundary_points(cav, 256));
    auto boundary_dist = [&](cplx z) {
        double d = R - std::abs(z);
        for (const auto& bnd : cavb)
            for (const auto& b : bnd) d = std::min(d, std::abs(z - b.point));
        return d;
    };

    std::vector<cplx> on_pts;
    for (std::size_t k = 1; on_pts.size() < static_cast<std::size_t>(n_on); ++k) {
        cplx z(R * (2.0 * halton(k, 2) - 1.0), R * (2.0 * halton(k, 3) - 1.0));
        if (support_contains(support, z) && boundary_dist(z) > band) on_pts.push_back(z);
        if (k > 1000000) throw Error("frostman_verify: on-support sampling starved");
    }

    std::vector<cplx> ext_pts, cav_pts;
    int n_ext = support.cavities.empty() ? n_off : (n_off + 1) / 2;
    for (std::size_t k = 1; ext_pts.size() < static_cast<std::size_t>(n_ext); ++k) {
        double rad = R * (1.0 + 0.01 + 1.5 * halton(k, 2));
        ext_pts.push_back(std::polar(rad, 2.0 * pi * halton(k, 3)));
    }
    if (!support.cavities.empty()) {
        int want = n_off - n_ext;
        for (std::size_t k = 1; cav_pts.size() < static_cast<std::size_t>(want); ++k) {
            cplx z(R * (2.0 * halton(k, 5) - 1.0), R * (2.0 * halton(k, 7) - 1.0));
            bool in_cav = false;
            for (const auto& cav : support.cavities) in_cav = in_cav || contains(cav, z);
            if (in_cav && boundary_dist(z) > band) cav_pts.push_back(z);
            if (k > 1000000) throw Error("frostman_verify: cavity sampling starved");
        }
    }

    auto eval_many = [&](const std::vector<cplx>& pts) {
        std::vector<double> vals(pts.size());
        map_fill(vals, [&](std::size_t i) { return frostman_F(field, support, pts[i], mode); });
        return vals;
    };
    std::vector<double> f_on = eval_many(on_pts);
    std::vector<double> f_ext = eval_many(ext_pts);
    std::vector<double> f_cav = eval_many(cav_pts);

    std::vector<double> sorted = f_on;
    std::sort(sorted.begin(), sorted.end());
    double cv = sorted.empty() ? 0.0
                               : (sorted.size() % 2 == 1
                                      ? sorted[sorted.size() / 2]
                                      : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                               sorted[sorted.size() / 2]));

    FrostmanReport rep;
    rep.constant_estimate = cv;
    for (double v : f_on)
        rep.on_support_max_deviation = std::max(rep.on_support_max_deviation, std::abs(v - cv));
    rep.exterior_min_margin = inf;
    for (double v : f_ext) rep.exterior_min_margin = std::min(rep.exterior_min_margin, v - cv);
    rep.cavity_min_margin = f_cav.empty() ? 0.0 : inf;
    for (double v : f_cav) rep.cavity_min_margin = std::min(rep.cavity_min_margin, v - cv);
    rep.samples_on = static_cast<int>(f_on.size());
    rep.samples_off = static_cast<int>(f_ext.size() + f_cav.size());
    return rep;
}

Region cavity_general(const LocalStructure& local) {
    if (local.phi.empty()) throw InvalidParameterError("cavity_general: empty polynomial");
    double C = local.strength;
    int p = local.halfdegree;
    double q = local.source.intensity;
    cplx z0 = local.source.location;

    auto phi_at = [&](cplx z) {
        cplx v = 0.0;
        for (std::size_t k = local.phi.size(); k-- > 0;) v = v * z + local.phi[k];
        return v;
    };
    auto dphi_at = [&](cplx z) {
        cplx v = 0.0;
        for (std::size_t k = local.phi.size(); k-- > 1;)
            v = v * z + static_cast<double>(k) * local.phi[k];
        return v;
    };
    auto Phi = [=](cplx z) { return std::pow(phi_at(z), p); };
    auto dPhi = [=](cplx z) {
        return static_cast<double>(p) * std::pow(phi_at(z), p - 1) * dphi_at(z);
    };

    if (std::abs(phi_at(z0)) == 0.0)
        throw InvalidParameterError("cavity_general: phi(z0) = 0");
    if (std::abs(dPhi(z0)) == 0.0)
        throw InvalidParameterError("cavity_general: (phi^p)'(z0) = 0");

    cplx w0 = Phi(z0);
    double r = std::sqrt(q / (2.0 * C * (1.0 + q)));
    double scale = std::max(std::abs(w0), r);

    // deterministic Newton continuation from z0 along the segment w0 -> w
    auto psi = [=](cplx w) {
        const int steps = 32;
        cplx z = z0;
        for (int s = 1; s <= steps; ++s) {
            cplx target = w0 + (w - w0) * (static_cast<double>(s) / steps);
            bool ok = false;
            for (int it = 0; it < 60; ++it) {
                cplx f = Phi(z) - target;
                if (std::abs(f) < 1e-14 * scale) {
                    ok = true;
                    break;
                }
                cplx d = dPhi(z);
                if (std::abs(d) < 1e-300) break;
                z -= f / d;
            }
            if (!ok)
                throw NewtonDivergenceError("cavity_general: Newton diverged inside the disc");
        }
        return z;
    };

    // probe the full boundary now so failures carry the last valid angle
    const int probes = 64;
    std::vector<cplx> ring(probes + 1);
    for (int k = 0; k < probes; ++k) {
        double th = 2.0 * pi * k / probes;
        try {
            ring[k] = psi(w0 + std::polar(r, th));
        } catch (const NewtonDivergenceError&) {
            throw NewtonDivergenceError(
                "cavity_general: inverse lost at theta = " + std::to_string(th) +
                " (valid range [0, " + std::to_string(th) + "))");
        }
    }
    // monodromy: continue the inverse once around the boundary circle by
    // seeding each Newton solve at the previous sample; if the disc encloses
    // a critical value of phi^p, pointwise solves still converge but the
    // loop returns on the wrong sheet
    ring[probes] = ring[0];
    cplx zc = ring[0];
    double zscale = std::abs(z0) + std::abs(zc) + 1.0;
    for (int k = 1; k <= probes; ++k) {
        cplx target = w0 + std::polar(r, 2.0 * pi * k / probes);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            cplx fv = Phi(zc) - target;
            if (std::abs(fv) < 1e-13 * scale) {
                ok = true;
                break;
            }
            cplx dv = dPhi(zc);
            if (std::abs(dv) < 1e-300) break;
            zc -= fv / dv;
        }
        if (!ok)
            throw NewtonDivergenceError("cavity_general: boundary continuation stalled");
        if (std::abs(zc - ring[k]) > 1e-6 * zscale)
            throw NewtonDivergenceError(
                "cavity_general: inverse is not single-valued on the disc (branch point "
                "enclosed; q too large)");
    }

    MappedDisc m;
    m.map = psi;
    m.dmap = [=](cplx w) { return 1.0 / dPhi(psi(w)); };
    m.param_center = w0;
    m.param_radius = r;
    return m;
}

} // namespace eqcavity
