#include "eqcavity/fekete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "eqcavity/equilibrium.hpp"
#include "eqcavity/parallel.hpp"

namespace eqcavity {

namespace {
constexpr double golden_angle = 2.39996322972865332;

void check_distinct(const std::vector<cplx>& pts, const FieldSpec& field) {
    std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j)
            if (pts[i] == pts[j]) throw CoincidentPointsError("fekete: coincident points");
        for (const auto& s : field.sources)
            if (pts[i] == s.location) throw CoincidentPointsError("fekete: point at a source");
    }
}

double grad_norm_of(const std::vector<std::array<double, 2>>& g) {
    double s = 0.0;
    for (const auto& v : g) s += v[0] * v[0] + v[1] * v[1];
    return std::sqrt(s);
}

// uniform in [0,1) from the raw engine; avoids distribution implementation
// differences so trajectories are reproducible everywhere
double unit_draw(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }
} // namespace

double energy(const std::vector<cplx>& points, const FieldSpec& field) {
    check_distinct(points, field);
    std::size_t n = points.size();
    double w = double(n) - 1.0;
    return map_sum<double>(n, [&](std::size_t i) {
        double e = 0.0;
        for (std::size_t j = 0; j < i; ++j) e -= std::log(std::abs(points[i] - points[j]));
        return e + w * eval_V(field, points[i]);
    });
}

std::vector<std::array<double, 2>> energy_gradient(const std::vector<cplx>& points,
                                                   const FieldSpec& field) {
    check_distinct(points, field);
    std::size_t n = points.size();
    double w = double(n) - 1.0;
    std::vector<std::array<double, 2>> g(n);
    map_fill(g, [&](std::size_t i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            cplx d = points[i] - points[j];
            acc -= d / std::norm(d);
        }
        auto gv = grad_V(field, points[i]);
        return std::array<double, 2>{acc.real() + w * gv[0], acc.imag() + w * gv[1]};
    });
    return g;
}

std::vector<cplx> initial_points(const FieldSpec& field, int N, unsigned long long seed) {
    if (N < 1) throw InvalidParameterError("fekete: N >= 1 required");
    double R = support_base(field.strength, field.halfdegree).radius;
    std::mt19937_64 rng(seed);
    std::vector<cplx> pts(N);
    for (int i = 0; i < N; ++i) {
        double r = R * std::sqrt((i + 0.5) / N);
        cplx base = std::polar(r, golden_angle * i);
        for (;;) {
            cplx noise(1e-3 * R * (2.0 * unit_draw(rng) - 1.0),
                       1e-3 * R * (2.0 * unit_draw(rng) - 1.0));
            cplx cand = base + noise;
            bool clash = false;
            for (const auto& s : field.sources)
                if (std::abs(cand - s.location) < 1e-6 * R) clash = true;
            for (int j = 0; j < i && !clash; ++j)
                if (cand == pts[j]) clash = true;
            if (!clash) {
                pts[i] = cand;
                break;
            }
        }
    }
    return pts;
}

FeketeState minimize_from(const FieldSpec& field, std::vector<cplx> start,
                          unsigned long long seed, const FeketeOptions& opts) {
    std::size_t n = start.size();
    if (n < 2) throw InvalidParameterError("fekete: N >= 2 required");
    double R = support_base(field.strength, field.halfdegree).radius;
    double step = opts.step0 > 0.0 ? opts.step0 : 0.5 * R * R / (double(n) * std::sqrt(double(n)));

    FeketeState st;
    st.seed = seed;
    st.points = std::move(start);
    st.energy = energy(st.points, field);

    std::vector<cplx> trial(n);
    for (int it = 0; it < opts.max_iter; ++it) {
        auto g = energy_gradient(st.points, field);
        st.grad_norm = grad_norm_of(g);
        if (st.grad_norm <= opts.grad_tol) {
            st.converged = true;
            return st;
        }
        bool accepted = false;
        while (step > 1e-18 * R * R) {
            for (std::size_t i = 0; i < n; ++i)
                trial[i] = st.points[i] - step * cplx(g[i][0], g[i][1]);
            double e;
            try {
                e = energy(trial, field);
            } catch (const CoincidentPointsError&) {
                step *= 0.5;
                continue;
            }
            if (e < st.energy && std::isfinite(e)) {
                st.points.swap(trial);
                st.energy = e;
                st.iterations = it + 1;
                step *= 1.1;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return st; // stalled; converged stays false
    }
    auto g = energy_gradient(st.points, field);
    st.grad_norm = grad_norm_of(g);
    st.converged = st.grad_norm <= opts.grad_tol;
    return st;
}

FeketeState minimize(const FieldSpec& field, int N, unsigned long long seed,
                     const FeketeOptions& opts) {
    return minimize_from(field, initial_points(field, N, seed), seed, opts);
}

SupportStats support_stats(const FeketeState& state, const SupportDescription& support) {
    SupportStats out;
    double R = support.base.radius;
    double band = 1e-2 * R;

    std::vector<std::vector<cplx>> cav_boundary;
    for (const auto& cav : support.cavities) {
        std::vector<cplx> b;
        for (const auto& s : boundary_points(cav, 256)) b.push_back(s.point);
        cav_boundary.push_back(std::move(b));
    }

    int off = 0;
    for (cplx z : state.points) {
        out.max_radius = std::max(out.max_radius, std::abs(z));
        if (support_contains(support, z)) continue;
        if (std::abs(z - support.base.center) > R) {
            if (std::abs(z - support.base.center) - R > band) ++off;
            continue;
        }
        for (std::size_t k = 0; k < support.cavities.size(); ++k) {
            if (!contains(support.cavities[k], z)) continue;
            double d = std::numeric_limits<double>::infinity();
            for (cplx b : cav_boundary[k]) d = std::min(d, std::abs(z - b));
            if (d > band) {
                ++out.inside_cavity;
                ++off;
            }
            break;
        }
    }
    out.offsupport_fraction = state.points.empty() ? 0.0 : double(off) / state.points.size();
    return out;
}

} // namespace eqcavity
