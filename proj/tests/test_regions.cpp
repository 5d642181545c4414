#include <doctest.h>

#include <cmath>
#include <random>

#include "eqcavity/quadrature.hpp"
#include "eqcavity/regions.hpp"

using namespace eqcavity;

namespace {

constexpr double pi = 3.14159265358979323846;

// trapezoid winding number from boundary samples (the curves are smooth and
// periodic, so this is spectrally accurate away from the boundary)
double winding(const std::vector<BoundarySample>& bnd, cplx z) {
    cplx acc = 0.0;
    double dth = 2.0 * pi / bnd.size();
    for (const auto& s : bnd) acc += s.velocity / (s.point - z) * dth;
    return (acc / (2.0 * pi * cplx(0.0, 1.0))).real();
}

std::vector<cplx> circle_polyline(cplx center, double radius, int n) {
    std::vector<cplx> pts(n);
    for (int k = 0; k < n; ++k) pts[k] = center + std::polar(radius, 2.0 * pi * k / n);
    return pts;
}

} // namespace

TEST_SUITE("regions") {

TEST_CASE("contains on power lemniscates") {
    PowerLemniscate cassini{2, cplx(1.0, 0.0), 1.5, std::nullopt};
    CHECK(contains(Region(cassini), cplx(0.0, 0.0)));   // |0-1| = 1 < 1.5
    CHECK(!contains(Region(cassini), cplx(0.0, 2.0)));  // |-4-1| = 5 > 1.5

    PowerLemniscate branch{2, cplx(0.04, 0.0), 0.03, cplx(0.2, 0.0)};
    CHECK(contains(Region(branch), cplx(0.2, 0.0)));
    CHECK(!contains(Region(branch), cplx(-0.2, 0.0))); // other branch of the same set
    PowerLemniscate whole{2, cplx(0.04, 0.0), 0.03, std::nullopt};
    CHECK(contains(Region(whole), cplx(-0.2, 0.0)));
}

TEST_CASE("support_contains is the set difference") {
    SupportDescription s{Disc{cplx(0.0, 0.0), 1.0},
                         {Region(Disc{cplx(0.6, 0.0), 0.19})},
                         Regime::DISJOINT_ROOTS};
    cplx in_cavity(0.6, 0.05);
    CHECK(contains(s.cavities[0], in_cavity));
    CHECK(!support_contains(s, in_cavity));
    CHECK(support_contains(s, cplx(-0.5, 0.0)));
    CHECK(!support_contains(s, cplx(1.2, 0.0)));
}

TEST_CASE("classify_root_set thresholds") {
    CHECK(classify_root_set(cplx(0.2, 0.0), 0.14, 2) == RootSetClass::DISJOINT_BRANCHES);
    CHECK(classify_root_set(cplx(0.2, 0.0), 0.2, 2) == RootSetClass::TOUCHES_ORIGIN);
    CHECK(classify_root_set(cplx(0.2, 0.0), 0.5768, 2) ==
          RootSetClass::CONNECTED_CONTAINS_ORIGIN);
    // the touching test is relative, 1e-14
    CHECK(classify_root_set(cplx(0.2, 0.0), 0.2 * (1.0 + 5e-15), 2) ==
          RootSetClass::TOUCHES_ORIGIN);
    CHECK(classify_root_set(cplx(0.2, 0.0), 0.2 * (1.0 + 1e-12), 2) ==
          RootSetClass::CONNECTED_CONTAINS_ORIGIN);
}

TEST_CASE("boundary_points closed forms") {
    PowerLemniscate branch{2, cplx(0.04, 0.0), 0.03, cplx(0.2, 0.0)};
    auto b = boundary_points(Region(branch), 16);
    CHECK(std::abs(b[0].point - cplx(std::sqrt(0.07), 0.0)) <= 1e-12);

    auto d = boundary_points(Region(Disc{cplx(0.0, 0.0), 1.0}), 8);
    CHECK(std::abs(d[2].point - cplx(0.0, 1.0)) <= 1e-15);   // theta = pi/2
    CHECK(std::abs(d[2].velocity - cplx(-1.0, 0.0)) <= 1e-15);

    CHECK_THROWS_AS(boundary_points(Region(Disc{cplx(0.0, 0.0), 1.0}), 4),
                    InvalidParameterError);
}

TEST_CASE("boundary_points error gates") {
    CHECK_THROWS_AS(boundary_points(Region(Annulus{cplx(0.0, 0.0), 0.3, 1.0}), 64),
                    InvalidParameterError);
    PowerLemniscate touching{2, cplx(0.2, 0.0), 0.2, std::nullopt};
    CHECK_THROWS_AS(boundary_points(Region(touching), 64), DegenerateRegionError);
    PowerLemniscate whole_disjoint{2, cplx(0.2, 0.0), 0.1, std::nullopt};
    CHECK_THROWS_AS(boundary_points(Region(whole_disjoint), 64), InvalidParameterError);
    PowerLemniscate branch_on_connected{2, cplx(0.2, 0.0), 0.5, cplx(0.66, 0.0)};
    CHECK_THROWS_AS(boundary_points(Region(branch_on_connected), 64), InvalidParameterError);
}

TEST_CASE("winding oracle: interior 1, exterior 0") {
    struct Probe {
        Region region;
        cplx inside;
        double tol;
    };
    MappedDisc md{[](cplx t) { return t + 0.1 * t * t; },
                  [](cplx t) { return 1.0 + 0.2 * t; }, cplx(0.0, 0.0), 1.0};
    std::vector<Probe> probes;
    probes.push_back({Region(Disc{cplx(0.3, 0.1), 0.7}), cplx(0.3, 0.1), 1e-10});
    probes.push_back(
        {Region(PowerLemniscate{2, cplx(0.04, 0.0), 0.03, cplx(0.2, 0.0)}), cplx(0.2, 0.0),
         1e-10});
    probes.push_back(
        {Region(PowerLemniscate{2, cplx(1.0, 0.0), 1.5, std::nullopt}), cplx(0.0, 0.0), 1e-10});
    probes.push_back({Region(md), cplx(0.0, 0.0), 1e-10});
    probes.push_back({Region(BoundaryCurve{circle_polyline(cplx(0.0, 0.0), 0.8, 512)}),
                      cplx(0.2, 0.0), 1e-3});
    for (const auto& pr : probes) {
        auto bnd = boundary_points(pr.region, 512);
        CHECK(std::abs(winding(bnd, pr.inside) - 1.0) <= pr.tol);
        CHECK(std::abs(winding(bnd, cplx(5.0, 4.0))) <= pr.tol);
    }
}

TEST_CASE("contains agrees with the winding number on random probes") {
    std::vector<Region> regions;
    regions.emplace_back(Disc{cplx(0.1, -0.2), 0.6});
    regions.emplace_back(PowerLemniscate{2, cplx(0.04, 0.0), 0.03, cplx(0.2, 0.0)});
    regions.emplace_back(PowerLemniscate{2, cplx(1.0, 0.0), 1.5, std::nullopt});
    std::mt19937_64 rng(97);
    for (const auto& region : regions) {
        auto bnd = boundary_points(region, 1024);
        double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
        for (const auto& s : bnd) {
            lo_x = std::min(lo_x, s.point.real());
            hi_x = std::max(hi_x, s.point.real());
            lo_y = std::min(lo_y, s.point.imag());
            hi_y = std::max(hi_y, s.point.imag());
        }
        double mx = 0.25 * (hi_x - lo_x), my = 0.25 * (hi_y - lo_y);
        std::uniform_real_distribution<double> ux(lo_x - mx, hi_x + mx), uy(lo_y - my, hi_y + my);
        int used = 0;
        while (used < 100) {
            cplx z(ux(rng), uy(rng));
            double w = winding(bnd, z);
            if (std::abs(w - std::lround(w)) > 1e-6) continue; // too close to the boundary
            ++used;
            CHECK(contains(region, z) == (std::lround(w) == 1));
        }
    }
}

TEST_CASE("velocity matches finite differences of the samples") {
    std::vector<Region> regions;
    regions.emplace_back(Disc{cplx(0.0, 0.0), 1.3});
    regions.emplace_back(PowerLemniscate{2, cplx(0.04, 0.0), 0.03, cplx(0.2, 0.0)});
    regions.emplace_back(PowerLemniscate{2, cplx(1.0, 0.0), 1.5, std::nullopt});
    for (const auto& region : regions) {
        int n = 4096;
        auto b = boundary_points(region, n);
        double dth = 2.0 * pi / n;
        double vmax = 0.0;
        for (const auto& s : b) vmax = std::max(vmax, std::abs(s.velocity));
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            // fourth-order central stencil to keep the truncation error
            // below the 1e-6 comparison threshold
            cplx fd = (-b[(k + 2) % n].point + 8.0 * b[(k + 1) % n].point -
                       8.0 * b[(k + n - 1) % n].point + b[(k + n - 2) % n].point) /
                      (12.0 * dth);
            worst = std::max(worst, std::abs(fd - b[k].velocity));
        }
        CHECK(worst <= 1e-6 * vmax);
    }
}

TEST_CASE("cavity_mass_closed reproduces the mass balance") {
    FieldSpec f;
    f.strength = 0.5;
    f.halfdegree = 1;
    f.sources.push_back({cplx(0.6, 0.0), 0.04});
    double r = std::sqrt(0.04 / (2.0 * 0.5 * 1.04));
    PowerLemniscate branch{1, cplx(0.6, 0.0), r, cplx(0.6, 0.0)};
    CHECK(cavity_mass_closed(f, branch) == doctest::Approx(0.04).epsilon(1e-12));

    FieldSpec g;
    g.strength = 1.0 / 50.0;
    g.halfdegree = 2;
    g.sources.push_back({cplx(1.0, 0.0), 0.125});
    g.sources.push_back({cplx(-1.0, 0.0), 0.125});
    double T = std::sqrt(0.125 / (2.0 * g.strength * 1.25));
    CHECK(T == doctest::Approx(1.5811388300841898).epsilon(1e-12));
    PowerLemniscate cassini{2, cplx(1.0, 0.0), T, std::nullopt};
    CHECK(cavity_mass_closed(g, cassini) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("cavity mass is monotone in the level and vanishes with it") {
    FieldSpec f;
    f.strength = 0.5;
    f.halfdegree = 1;
    double prev = 1e300;
    for (double level : {0.3, 0.2, 0.1, 0.05, 0.01}) {
        PowerLemniscate lem{1, cplx(0.6, 0.0), level, cplx(0.6, 0.0)};
        double m = cavity_mass_closed(f, lem);
        CHECK(m > 0.0);
        CHECK(m < prev);
        prev = m;
    }
    CHECK(prev <= 2.0 * 0.5 * 1e-4 + 1e-15);
}

TEST_CASE("disjoint branches are separated") {
    PowerLemniscate plus{2, cplx(0.04, 0.0), 0.03, cplx(0.2, 0.0)};
    PowerLemniscate minus{2, cplx(0.04, 0.0), 0.03, cplx(-0.2, 0.0)};
    auto a = boundary_points(Region(plus), 128);
    auto b = boundary_points(Region(minus), 128);
    double dmin = 1e300;
    for (const auto& s : a)
        for (const auto& t : b) dmin = std::min(dmin, std::abs(s.point - t.point));
    CHECK(dmin > 0.1);
}

TEST_CASE("branch_root takes the seeded branch") {
    cplx w(0.07, 0.0);
    CHECK(std::abs(branch_root(w, cplx(0.2, 0.0), 2) - std::sqrt(0.07)) <= 1e-14);
    CHECK(std::abs(branch_root(w, cplx(-0.2, 0.0), 2) + std::sqrt(0.07)) <= 1e-14);
    CHECK(std::abs(branch_root(cplx(0.3, 0.2), cplx(0.5, 0.1), 1) - cplx(0.3, 0.2)) == 0.0);
    cplx r3 = branch_root(cplx(0.02, 0.05), std::polar(1.0, 2.0 * pi / 3.0), 3);
    CHECK(std::abs(std::pow(r3, 3) - cplx(0.02, 0.05)) <= 1e-14);
    CHECK(std::abs(std::arg(r3) - 2.0 * pi / 3.0) < pi / 3.0); // stays near the seed sector
}

TEST_CASE("region_diameter") {
    CHECK(region_diameter(Region(Disc{cplx(0.0, 0.0), 1.0})) == doctest::Approx(2.0));
    CHECK(region_diameter(Region(Disc{cplx(1.0, 1.0), 0.5})) == doctest::Approx(1.0));
    PowerLemniscate cassini{2, cplx(1.0, 0.0), 1.5, std::nullopt};
    double d = region_diameter(Region(cassini));
    // bounding-box diagonal: at least the real-axis extent 2 sqrt(2.5),
    // at most sqrt(2) times it
    CHECK(d >= 2.0 * std::sqrt(2.5) - 1e-9);
    CHECK(d <= 2.0 * std::sqrt(5.0));
}

TEST_CASE("support_boundaries orientation") {
    SupportDescription s{Disc{cplx(0.0, 0.0), 1.0},
                         {Region(Disc{cplx(0.6, 0.0), 0.19})},
                         Regime::DISJOINT_ROOTS};
    auto curves = support_boundaries(s, 256);
    REQUIRE(curves.size() == 2);
    CHECK(std::abs(std::abs(curves[0][0].point) - 1.0) <= 1e-14);
    CHECK(winding(curves[0], cplx(0.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(winding(curves[1], cplx(0.6, 0.0)) == doctest::Approx(-1.0).epsilon(1e-10));
}

} // TEST_SUITE
