#include "eqcavity/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "eqcavity/parallel.hpp"

namespace eqcavity {

namespace {
constexpr double pi = 3.14159265358979323846;

std::map<int, std::pair<std::vector<double>, std::vector<double>>> g_gauss_cache;
std::mutex g_gauss_mutex;
} // namespace

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
    {
        std::lock_guard<std::mutex> lock(g_gauss_mutex);
        auto it = g_gauss_cache.find(n);
        if (it != g_gauss_cache.end()) {
            x = it->second.first;
            w = it->second.second;
            return;
        }
    }
    // Newton on P_n, Chebyshev-like initial guesses
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = 0.5 * (1.0 - t); // map [-1,1] -> [0,1], reversed so x ascending
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    std::lock_guard<std::mutex> lock(g_gauss_mutex);
    g_gauss_cache[n] = {x, w};
}

namespace {

struct Acc {
    cplx v{};
    double a = 0.0;
    Acc& operator+=(const Acc& o) {
        v += o.v;
        a += o.a;
        return *this;
    }
    Acc operator+(const Acc& o) const {
        Acc r = *this;
        r += o;
        return r;
    }
};

// sum of w_i (hi-lo) s f(c + s e^{i th_j}) dth over the polar grid,
// s = lo + (hi-lo) x_i; radial bounds may depend on the angle
template <class F, class LoFn, class HiFn>
Acc polar_pass(F&& f, cplx center, LoFn&& lo_fn, HiFn&& hi_fn, int nrad, int nang) {
    std::vector<double> gx, gw;
    gauss_legendre_01(nrad, gx, gw);
    double dth = 2.0 * pi / nang;
    return map_sum<Acc>(static_cast<std::size_t>(nrad) * nang, [&](std::size_t idx) {
        int j = static_cast<int>(idx / nrad);
        int i = static_cast<int>(idx % nrad);
        double th = dth * j;
        double lo = lo_fn(th), hi = hi_fn(th);
        double s = lo + (hi - lo) * gx[i];
        cplx term = gw[i] * (hi - lo) * s * dth * f(center + std::polar(s, th));
        return Acc{term, std::abs(term)};
    });
}

// same integral with the radial substitution s = hi(th) x^2, so integrands
// with an ln(1/s) blow-up at the center integrate accurately
template <class F, class HiFn>
Acc duffy_pass(F&& f, cplx center, HiFn&& hi_fn, int nrad, int nang) {
    std::vector<double> gx, gw;
    gauss_legendre_01(nrad, gx, gw);
    double dth = 2.0 * pi / nang;
    return map_sum<Acc>(static_cast<std::size_t>(nrad) * nang, [&](std::size_t idx) {
        int j = static_cast<int>(idx / nrad);
        int i = static_cast<int>(idx % nrad);
        double th = dth * j;
        double hi = hi_fn(th);
        double x = gx[i];
        double s = hi * x * x;
        cplx term = gw[i] * 2.0 * hi * hi * x * x * x * dth * f(center + std::polar(s, th));
        return Acc{term, std::abs(term)};
    });
}

// doubling driver; convergence is judged against the absolute-mass scale so
// null integrals (value ~ 0) terminate too
template <class Pass>
IntegrationResult converge(Pass&& pass, int nrad0, int nang0, int nrad_max, double rel_tol) {
    cplx prev{};
    bool have = false;
    long long evals = 0;
    double est = std::numeric_limits<double>::infinity();
    cplx best{};
    for (int nrad = nrad0, nang = nang0; nrad <= nrad_max; nrad *= 2, nang *= 2) {
        Acc acc = pass(nrad, nang);
        evals += static_cast<long long>(nrad) * nang;
        if (have) {
            est = std::abs(acc.v - prev);
            double scale = std::max(acc.a, 1e-300);
            best = acc.v;
            if (est <= rel_tol * scale) return {acc.v, est, evals};
        }
        prev = acc.v;
        best = acc.v;
        have = true;
    }
    throw ToleranceNotMetError("integrate_area: doubling loop exhausted", std::abs(best), est);
}

// distance from the ray through angle th (from `from`) to the circle
// |t - (c - from)| = r; `from` must be inside the circle
double clipped_radius(cplx from, cplx c, double r, double th) {
    cplx d = from - c;
    double beta = d.real() * std::cos(th) + d.imag() * std::sin(th);
    double disc = beta * beta + r * r - std::norm(d);
    return -beta + std::sqrt(std::max(disc, 0.0));
}

double dist_to_polyline(const std::vector<cplx>& poly, cplx z) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
        cplx a = poly[k], b = poly[(k + 1) % n];
        cplx ab = b - a;
        double t = std::clamp(((z - a) * std::conj(ab)).real() / std::max(std::norm(ab), 1e-300),
                              0.0, 1.0);
        best = std::min(best, std::abs(z - (a + t * ab)));
    }
    return best;
}

bool polyline_contains(const std::vector<cplx>& poly, cplx z) {
    double total = 0.0;
    std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k)
        total += std::arg((poly[(k + 1) % n] - z) / (poly[k] - z));
    return std::lround(total / (2.0 * pi)) == 1;
}

struct QuadtreeStats {
    cplx value{};
    double est = 0.0;
    long long evals = 0;
};

void quadtree_cell(const Integrand& f, const std::vector<cplx>& poly, double x0, double y0,
                   double h, int depth, int max_depth, QuadtreeStats& out) {
    cplx center(x0 + 0.5 * h, y0 + 0.5 * h);
    double circum = h * 0.70710678118654752440;
    double d = dist_to_polyline(poly, center);
    if (d > circum) {
        if (!polyline_contains(poly, center)) return;
        // fully interior: 4x4 tensor Gauss
        std::vector<double> gx, gw;
        gauss_legendre_01(4, gx, gw);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                cplx p(x0 + h * gx[i], y0 + h * gx[j]);
                out.value += gw[i] * gw[j] * h * h * f(p);
                ++out.evals;
            }
        return;
    }
    if (depth >= max_depth) {
        // unresolved boundary cell: midpoint rule if inside, honest error bump
        cplx fv = f(center);
        ++out.evals;
        if (polyline_contains(poly, center)) out.value += h * h * fv;
        out.est += h * h * std::abs(fv);
        return;
    }
    double hh = 0.5 * h;
    quadtree_cell(f, poly, x0, y0, hh, depth + 1, max_depth, out);
    quadtree_cell(f, poly, x0 + hh, y0, hh, depth + 1, max_depth, out);
    quadtree_cell(f, poly, x0, y0 + hh, hh, depth + 1, max_depth, out);
    quadtree_cell(f, poly, x0 + hh, y0 + hh, hh, depth + 1, max_depth, out);
}

IntegrationResult quadtree_area(const Integrand& f, const std::vector<cplx>& poly,
                                int max_depth) {
    double xlo = poly[0].real(), xhi = xlo, ylo = poly[0].imag(), yhi = ylo;
    for (const auto& z : poly) {
        xlo = std::min(xlo, z.real());
        xhi = std::max(xhi, z.real());
        ylo = std::min(ylo, z.imag());
        yhi = std::max(yhi, z.imag());
    }
    double h = std::max(xhi - xlo, yhi - ylo) * 1.0000001;
    QuadtreeStats st;
    quadtree_cell(f, poly, xlo, ylo, h, 0, max_depth, st);
    return {st.value, st.est, st.evals};
}

cplx lemniscate_pullback_jacobian(const PowerLemniscate& lem, cplx zroot) {
    double p = lem.power;
    return 1.0 / (p * p * std::pow(std::abs(zroot), 2.0 * p - 2.0));
}

} // namespace

IntegrationResult integrate_area(const Integrand& f, const Region& region, double rel_tol) {
    if (rel_tol < 1e-12) throw InvalidParameterError("integrate_area: rel_tol must be >= 1e-12");

    if (std::holds_alternative<Disc>(region)) {
        const auto& d = std::get<Disc>(region);
        return converge(
            [&](int nr, int na) {
                return polar_pass(f, d.center, [](double) { return 0.0; },
                                  [&](double) { return d.radius; }, nr, na);
            },
            64, 256, 1024, rel_tol);
    }
    if (std::holds_alternative<Annulus>(region)) {
        const auto& a = std::get<Annulus>(region);
        return converge(
            [&](int nr, int na) {
                return polar_pass(f, a.center, [&](double) { return a.inner; },
                                  [&](double) { return a.outer; }, nr, na);
            },
            64, 256, 1024, rel_tol);
    }
    if (std::holds_alternative<PowerLemniscate>(region)) {
        const auto& lem = std::get<PowerLemniscate>(region);
        RootSetClass cls = classify_root_set(lem.center_w, lem.level, lem.power);
        if (cls == RootSetClass::TOUCHES_ORIGIN)
            throw DegenerateRegionError("integrate_area: lemniscate touches the origin");
        if (lem.representative) {
            // pull back through w = z^p onto D_level(center_w)
            cplx rep = *lem.representative;
            auto g = [&](cplx w) {
                cplx zr = branch_root(w, rep, lem.power);
                return f(zr) * lemniscate_pullback_jacobian(lem, zr);
            };
            return converge(
                [&](int nr, int na) {
                    return polar_pass(g, lem.center_w, [](double) { return 0.0; },
                                      [&](double) { return lem.level; }, nr, na);
                },
                64, 256, 1024, rel_tol);
        }
        if (cls == RootSetClass::DISJOINT_BRANCHES)
            throw InvalidParameterError("integrate_area: untagged disjoint lemniscate");
        // connected: star-shaped radial rule about the origin
        double p = lem.power;
        double c2 = std::norm(lem.center_w), r2 = lem.level * lem.level;
        auto smax = [&](double th) {
            double b = (std::conj(lem.center_w) * std::polar(1.0, p * th)).real();
            return std::pow(b + std::sqrt(b * b + r2 - c2), 1.0 / p);
        };
        return converge(
            [&](int nr, int na) {
                return polar_pass(f, cplx(0.0, 0.0), [](double) { return 0.0; }, smax, nr, na);
            },
            64, 256, 1024, rel_tol);
    }
    if (std::holds_alternative<MappedDisc>(region)) {
        const auto& m = std::get<MappedDisc>(region);
        auto g = [&](cplx t) {
            cplx dm = m.dmap(t);
            return f(m.map(t)) * std::norm(dm);
        };
        return converge(
            [&](int nr, int na) {
                return polar_pass(g, m.param_center, [](double) { return 0.0; },
                                  [&](double) { return m.param_radius; }, nr, na);
            },
            64, 256, 1024, rel_tol);
    }
    const auto& bc = std::get<BoundaryCurve>(region);
    auto res = quadtree_area(f, bc.points, 10);
    if (res.error_estimate > rel_tol * std::max(std::abs(res.value), 1e-300)) {
        // fallback accuracy is what it is; report rather than loop forever
        return res;
    }
    return res;
}

IntegrationResult integrate_area(const Integrand& f, const SupportDescription& s,
                                 double rel_tol) {
    IntegrationResult total = integrate_area(f, Region(s.base), rel_tol);
    for (const auto& cav : s.cavities) {
        IntegrationResult r = integrate_area(f, cav, rel_tol);
        total.value -= r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    return total;
}

IntegrationResult integrate_boundary(const Integrand& f, const Region& region, int n) {
    if (n < 64 || (n & (n - 1)) != 0)
        throw InvalidParameterError("integrate_boundary: n must be a power of 2, >= 64");
    if (std::holds_alternative<Annulus>(region)) {
        const auto& a = std::get<Annulus>(region);
        auto outer = integrate_boundary(f, Region(Disc{a.center, a.outer}), n);
        auto inner = integrate_boundary(f, Region(Disc{a.center, a.inner}), n);
        return {outer.value - inner.value, outer.error_estimate + inner.error_estimate,
                outer.evaluations + inner.evaluations};
    }
    auto eval = [&](int m) {
        auto bs = boundary_points(region, m);
        double dth = 2.0 * pi / m;
        return map_sum<cplx>(static_cast<std::size_t>(m), [&](std::size_t k) {
            return f(bs[k].point) * bs[k].velocity * dth;
        });
    };
    cplx coarse = eval(n);
    cplx fine = eval(2 * n);
    return {fine, std::abs(fine - coarse), 3LL * n};
}

namespace {

// core: integral of density(w) ln(1/|w-z|) over a disc-parametrized domain,
// where `point(t)` maps the parameter disc D_rad(ctr) onto the region and
// `weight(t)` carries density and Jacobian; `tsing` is the parameter-plane
// singularity location (or far away if z is outside).
double log_core(const std::function<cplx(cplx)>& point, const std::function<double(cplx)>& weight,
                cplx ctr, double rad, cplx z, cplx tsing, bool singular_inside, double rel_tol) {
    auto f = [&](cplx t) -> cplx {
        return weight(t) * std::log(1.0 / std::abs(point(t) - z));
    };
    IntegrationResult res;
    if (singular_inside) {
        res = converge(
            [&](int nr, int na) {
                return duffy_pass(f, tsing,
                                  [&](double th) { return clipped_radius(tsing, ctr, rad, th); },
                                  nr, na);
            },
            64, 256, 1024, rel_tol);
    } else {
        res = converge(
            [&](int nr, int na) {
                return polar_pass(f, ctr, [](double) { return 0.0; },
                                  [&](double) { return rad; }, nr, na);
            },
            64, 256, 2048, rel_tol);
    }
    return res.value.real();
}

} // namespace

double log_potential_numeric(const std::function<double(cplx)>& density, const Region& region,
                             cplx z, double rel_tol) {
    if (rel_tol < 1e-10 && !std::holds_alternative<BoundaryCurve>(region))
        throw InvalidParameterError("log_potential_numeric: rel_tol must be >= 1e-10");

    if (std::holds_alternative<Disc>(region)) {
        const auto& d = std::get<Disc>(region);
        bool inside = std::abs(z - d.center) < d.radius;
        return log_core([](cplx t) { return t; }, density, d.center, d.radius, z, z, inside,
                        rel_tol);
    }
    if (std::holds_alternative<MappedDisc>(region)) {
        const auto& m = std::get<MappedDisc>(region);
        // parameter-plane singularity via Newton from the disc center
        cplx t = m.param_center;
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            cplx fz = m.map(t) - z;
            if (std::abs(fz) < 1e-13 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
            cplx dm = m.dmap(t);
            if (std::abs(dm) < 1e-300) break;
            cplx step = fz / dm;
            // stay close to the parameter disc; damp big steps
            if (std::abs(step) > 0.5 * m.param_radius)
                step *= 0.5 * m.param_radius / std::abs(step);
            t -= step;
        }
        bool inside = converged && std::abs(t - m.param_center) < m.param_radius * (1.0 - 1e-12);
        auto weight = [&](cplx tt) { return density(m.map(tt)) * std::norm(m.dmap(tt)); };
        return log_core([&](cplx tt) { return m.map(tt); }, weight, m.param_center,
                        m.param_radius, z, t, inside, rel_tol);
    }
    if (std::holds_alternative<BoundaryCurve>(region)) {
        const auto& bc = std::get<BoundaryCurve>(region);
        double diam = region_diameter(region);
        double eps = 1e-3 * diam;
        Integrand f = [&](cplx w) -> cplx {
            return density(w) * std::log(1.0 / std::max(std::abs(w - z), eps));
        };
        auto res = quadtree_area(f, bc.points, 10);
        double val = res.value.real();
        if (polyline_contains(bc.points, z)) val += density(z) * pi * eps * eps * 0.5;
        return val;
    }
    throw InvalidParameterError(
        "log_potential_numeric: generic densities support disc/mapped/boundary regions");
}

double log_potential_numeric(const FieldSpec& field, const Region& region, cplx z,
                             double rel_tol) {
    auto density = [&](cplx w) {
        return (1.0 + field.q_total()) * laplacian_Q(field, w) / (2.0 * pi);
    };

    if (std::holds_alternative<PowerLemniscate>(region)) {
        const auto& lem = std::get<PowerLemniscate>(region);
        // (1+q) DeltaQ dA_z pushes forward through w=z^p to the uniform
        // density 2C(1+q)/pi dA_w on D_level(center_w)
        double unif = 2.0 * field.strength * (1.0 + field.q_total()) / pi;
        if (lem.representative) {
            cplx rep = *lem.representative;
            cplx wz = std::pow(z, lem.power);
            bool inside = contains(region, z);
            auto pointfn = [&](cplx w) { return branch_root(w, rep, lem.power); };
            auto weight = [&](cplx) { return unif; };
            return log_core(pointfn, weight, lem.center_w, lem.level, z, wz, inside, rel_tol);
        }
        // connected set: product over the p roots collapses the kernel,
        // sum_k ln 1/|zeta_k(w) - z| = ln 1/|w - z^p|
        cplx wz = std::pow(z, lem.power);
        bool inside = std::abs(wz - lem.center_w) < lem.level;
        auto pointfn = [](cplx w) { return w; };
        auto weight = [&](cplx) { return unif; };
        return log_core(pointfn, weight, lem.center_w, lem.level, wz, wz, inside, rel_tol);
    }
    if (std::holds_alternative<Disc>(region) || std::holds_alternative<MappedDisc>(region) ||
        std::holds_alternative<BoundaryCurve>(region)) {
        return log_potential_numeric(density, region, z, rel_tol);
    }
    throw InvalidParameterError("log_potential_numeric: unsupported region kind");
}

} // namespace eqcavity
