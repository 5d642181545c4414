#pragma once
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "eqcavity/field.hpp"

namespace eqcavity {

struct Disc {
    cplx center;
    double radius;
};

// S_V for a source at the origin: inner < |z| < outer.
struct Annulus {
    cplx center;
    double inner;
    double outer;
};

enum class RootSetClass { DISJOINT_BRANCHES, TOUCHES_ORIGIN, CONNECTED_CONTAINS_ORIGIN };

// {z : |z^p - c| < r}. With no representative the region is the whole set
// (connected when r > |c|); with a representative z* it is the single branch
// component containing z*, i.e. the p-th root of the disc D_r(c) through z*.
struct PowerLemniscate {
    int power;
    cplx center_w;
    double level;
    std::optional<cplx> representative;
};

// Image of the disc |t - param_center| < param_radius under an analytic map.
// Used for conformal-family images (parameter disc = unit disc) and for the
// Newton-inverted cavities psi(D_r(phi^p(z0))).
struct MappedDisc {
    std::function<cplx(cplx)> map;
    std::function<cplx(cplx)> dmap;
    cplx param_center;
    double param_radius;
};

// Closed polyline fallback for synthetic/perturbed domains; positively
// oriented, uniformly spaced in parameter.
struct BoundaryCurve {
    std::vector<cplx> points;
};

using Region = std::variant<Disc, Annulus, PowerLemniscate, MappedDisc, BoundaryCurve>;

enum class Regime { NO_SOURCES, DISJOINT_ROOTS, CONNECTED_LEMNISCATE, ANNULUS, UNSUPPORTED };

struct SupportDescription {
    Disc base;                   // S_Q = D_R(0)
    std::vector<Region> cavities; // components of Omega (or the annulus hole)
    Regime regime = Regime::NO_SOURCES;
};

const char* regime_name(Regime r);

RootSetClass classify_root_set(cplx center_w, double level, int power);

bool contains(const Region& region, cplx z);
// inside the base disc and no cavity
bool support_contains(const SupportDescription& s, cplx z);

struct BoundarySample {
    cplx point;    // z(theta_k), theta_k = 2 pi k / n
    cplx velocity; // dz/dtheta at theta_k
};

// Smooth positively oriented parametrization; throws DegenerateRegionError
// for TOUCHES_ORIGIN lemniscates and InvalidParameterError for Annulus
// (two boundary circles; see integrate_boundary / support_boundaries).
std::vector<BoundarySample> boundary_points(const Region& region, int n);

// One curve per boundary component: outer circle first (positive), then each
// cavity boundary traversed negatively.
std::vector<std::vector<BoundarySample>> support_boundaries(const SupportDescription& s, int n);

// mu_V mass of a lemniscate cavity: 2C(1+q) level^2 for one branch,
// 2pC(1+q) level^2 for the whole set.
double cavity_mass_closed(const FieldSpec& field, const PowerLemniscate& region);

// Seeded continuous branch of w^{1/p} through rep (rep^p must lie within
// angle < pi of w about 0, true whenever both lie in a disc not containing 0).
cplx branch_root(cplx w, cplx rep, int power);

double region_diameter(const Region& region);

} // namespace eqcavity
