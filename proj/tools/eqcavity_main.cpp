#include <cmath>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eqcavity/conformal.hpp"
#include "eqcavity/equilibrium.hpp"
#include "eqcavity/fekete.hpp"
#include "eqcavity/io.hpp"

using namespace eqcavity;
using nlohmann::json;

namespace {

constexpr double pi = 3.14159265358979323846;

struct Flags {
    std::string config;
    std::string out;
    std::string format;
    long long seed = -1;
    double tol = -1.0;
};

double opt_num(const json& o, const char* key, double dflt) {
    if (!o.contains(key)) return dflt;
    if (!o.at(key).is_number()) throw ConfigError(std::string("option ") + key + " must be a number");
    return o.at(key).get<double>();
}

int opt_int(const json& o, const char* key, int dflt) {
    if (!o.contains(key)) return dflt;
    if (!o.at(key).is_number_integer())
        throw ConfigError(std::string("option ") + key + " must be an integer");
    return o.at(key).get<int>();
}

std::string opt_str(const json& o, const char* key, const char* dflt) {
    if (!o.contains(key)) return dflt;
    if (!o.at(key).is_string())
        throw ConfigError(std::string("option ") + key + " must be a string");
    return o.at(key).get<std::string>();
}

std::string artifact_path(const RunConfig& rc, const std::string& fmt) {
    return opt_str(rc.options, "out",
                   ("eqcavity_" + rc.task + (fmt == "svg" ? ".svg" : ".csv")).c_str());
}

std::string pick_format(const RunConfig& rc, const char* dflt) {
    std::string f = opt_str(rc.options, "format", dflt);
    if (f != "csv" && f != "svg") throw ConfigError("format must be csv or svg");
    return f;
}

void emit(const json& summary) { std::cout << summary.dump() << "\n"; }

std::vector<SvgCurve> support_curves(const SupportDescription& sup, int n) {
    std::vector<SvgCurve> curves;
    auto bs = support_boundaries(sup, n);
    for (std::size_t k = 0; k < bs.size(); ++k) {
        SvgCurve c;
        for (const auto& s : bs[k]) c.points.push_back(s.point);
        c.fill = k > 0;
        curves.push_back(std::move(c));
    }
    return curves;
}

double halton(unsigned long long i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * double(i % base);
        i /= base;
    }
    return r;
}

int run_support(const RunConfig& rc) {
    SupportDescription sup = build_support(rc.field);
    if (sup.regime == Regime::UNSUPPORTED) {
        std::cerr << "support: source configuration outside the constructible regimes\n";
        return 3;
    }
    int n = opt_int(rc.options, "n", 256);
    std::string fmt = pick_format(rc, "csv");
    std::string out = artifact_path(rc, fmt);
    if (fmt == "csv")
        write_boundaries_csv(support_boundaries(sup, n), out);
    else
        write_svg(support_curves(sup, n), {}, out);
    emit({{"task", "support"},
          {"status", "ok"},
          {"regime", regime_name(sup.regime)},
          {"radius", sup.base.radius},
          {"n_cavities", sup.cavities.size()},
          {"artifact", out}});
    return 0;
}

int run_frostman(const RunConfig& rc) {
    SupportDescription sup = build_support(rc.field);
    if (sup.regime == Regime::UNSUPPORTED) {
        std::cerr << "frostman: unsupported regime\n";
        return 3;
    }
    std::string mode_s = opt_str(rc.options, "mode", "numeric");
    if (mode_s != "numeric" && mode_s != "closed")
        throw ConfigError("frostman mode must be numeric or closed");
    FrostmanMode mode = mode_s == "closed" ? FrostmanMode::CLOSED : FrostmanMode::NUMERIC;
    int n_on = opt_int(rc.options, "n_on", 200);
    int n_off = opt_int(rc.options, "n_off", 100);
    double tol = opt_num(rc.options, "tol", 1e-6);

    FrostmanReport rep = frostman_verify(rc.field, sup, n_on, n_off, mode);
    bool pass = rep.on_support_max_deviation <= tol * (1.0 + std::abs(rep.constant_estimate)) &&
                rep.exterior_min_margin >= -1e-8 && rep.cavity_min_margin >= -1e-8;

    // artifact rows: a fresh deterministic sample of F on/off the support
    std::vector<FrostmanRow> rows;
    double R = sup.base.radius;
    unsigned long long idx = 1;
    int kept = 0;
    while (kept < n_on && idx < 200000) {
        cplx z(R * (2.0 * halton(idx, 2) - 1.0), R * (2.0 * halton(idx, 3) - 1.0));
        ++idx;
        if (!support_contains(sup, z)) continue;
        rows.push_back({z, frostman_F(rc.field, sup, z, mode), "on"});
        ++kept;
    }
    for (int k = 0; k < n_off / 2; ++k) {
        cplx z = std::polar(R * (1.01 + 1.5 * halton(k + 1, 2)), 2.0 * pi * halton(k + 1, 3));
        rows.push_back({z, frostman_F(rc.field, sup, z, mode), "exterior"});
    }
    for (std::size_t c = 0; c < sup.cavities.size(); ++c) {
        double d = region_diameter(sup.cavities[c]);
        cplx ctr = 0.0;
        auto bpts = boundary_points(sup.cavities[c], 64);
        for (const auto& b : bpts) ctr += b.point;
        ctr /= double(bpts.size());
        int got = 0;
        unsigned long long j = 1;
        while (got < std::max(1, n_off / 2 / int(sup.cavities.size())) && j < 100000) {
            cplx z = ctr + cplx(d * (halton(j, 5) - 0.5), d * (halton(j, 7) - 0.5));
            ++j;
            if (!contains(sup.cavities[c], z)) continue;
            rows.push_back({z, frostman_F(rc.field, sup, z, mode), "cavity"});
            ++got;
        }
    }
    std::string fmt = pick_format(rc, "csv");
    if (fmt != "csv") throw ConfigError("frostman artifacts are csv only");
    std::string out = artifact_path(rc, fmt);
    write_frostman_csv(rows, out);

    emit({{"task", "frostman"},
          {"status", pass ? "ok" : "fail"},
          {"mode", mode_s},
          {"constant", rep.constant_estimate},
          {"max_deviation", rep.on_support_max_deviation},
          {"exterior_margin", rep.exterior_min_margin},
          {"cavity_margin", rep.cavity_min_margin},
          {"artifact", out}});
    return pass ? 0 : 1;
}

int run_quadcheck(const RunConfig& rc) {
    SupportDescription sup = build_support(rc.field);
    if (sup.regime == Regime::UNSUPPORTED) {
        std::cerr << "quadcheck: unsupported regime\n";
        return 3;
    }
    std::string check = opt_str(rc.options, "check", "area");
    int max_degree = opt_int(rc.options, "max_degree", 8);
    double tol = opt_num(rc.options, "tol", 1e-6);
    std::string fmt = pick_format(rc, "csv");
    if (fmt != "csv") throw ConfigError("quadcheck artifacts are csv only");
    std::string out = artifact_path(rc, fmt);

    QuadratureReport combined;
    double worst = 0.0;
    if (check == "area") {
        std::string kappa_s = opt_str(rc.options, "kappa", "2pi");
        if (kappa_s != "2pi" && kappa_s != "4pi")
            throw ConfigError("kappa must be 2pi or 4pi");
        KappaConvention kappa =
            kappa_s == "2pi" ? KappaConvention::TWO_PI : KappaConvention::FOUR_PI;
        if (sup.cavities.empty())
            throw ConfigError("quadcheck area: the field has no cavity");
        for (const auto& cav : sup.cavities) {
            std::vector<std::pair<cplx, double>> nodes;
            for (const auto& s : rc.field.sources)
                if (contains(cav, s.location)) nodes.push_back({s.location, s.intensity});
            QuadratureReport rep = check_area_quadrature(rc.field, cav, nodes, max_degree, kappa);
            worst = std::max(worst, rep.max_rel());
            for (std::size_t k = 0; k < rep.degrees.size(); ++k) {
                combined.degrees.push_back(rep.degrees[k]);
                combined.lhs.push_back(rep.lhs[k]);
                combined.rhs.push_back(rep.rhs[k]);
                combined.abs_residual.push_back(rep.abs_residual[k]);
                combined.rel_residual.push_back(rep.rel_residual[k]);
            }
        }
    } else if (check == "inverted") {
        cplx alpha(opt_num(rc.options, "alpha_re", 0.0), opt_num(rc.options, "alpha_im", 0.0));
        combined = check_inverted_exterior(rc.field, sup, alpha, max_degree);
        worst = combined.max_rel();
    } else {
        throw ConfigError("quadcheck check must be area or inverted");
    }
    write_quadcheck_csv(combined, out);
    bool pass = worst <= tol;
    emit({{"task", "quadcheck"},
          {"status", pass ? "ok" : "fail"},
          {"check", check},
          {"max_rel_residual", worst},
          {"artifact", out}});
    return pass ? 0 : 1;
}

int run_conformal(const RunConfig& rc) {
    std::string fam_s = opt_str(rc.options, "family", "area");
    ConformalFamily fam;
    fam.p = opt_int(rc.options, "map_p", 1);
    fam.scale = cplx(opt_num(rc.options, "scale_re", 1.0), opt_num(rc.options, "scale_im", 0.0));
    fam.zeta0 = cplx(opt_num(rc.options, "zeta0_re", 0.0), opt_num(rc.options, "zeta0_im", 0.0));
    cplx b(opt_num(rc.options, "b_re", 0.0), opt_num(rc.options, "b_im", 0.0));
    cplx c(opt_num(rc.options, "c_re", 0.0), opt_num(rc.options, "c_im", 0.0));
    int weight;
    if (fam_s == "area") {
        fam.kind = MapFamily::AREA_NODE_OFFORIGIN;
        weight = 2 * fam.p;
    } else if (fam_s == "nonzero") {
        fam.kind = MapFamily::BOUNDARY_XI_NONZERO;
        fam.coeffs = {b};
        weight = -2 * fam.p;
    } else if (fam_s == "zero") {
        fam.kind = MapFamily::BOUNDARY_XI_ZERO;
        fam.coeffs = {b, c};
        weight = -2 * fam.p;
    } else {
        throw ConfigError("conformal family must be area, nonzero or zero");
    }
    weight = opt_int(rc.options, "weight_exponent", weight);
    if (weight < 0 && weight % 2 != 0)
        throw ConfigError("negative weight_exponent must be even");
    int n = opt_int(rc.options, "n", 2048);
    int max_degree = opt_int(rc.options, "max_degree", 8);
    double tol = opt_num(rc.options, "tol", 1e-7);

    bool univalent = check_univalence(fam, n);
    auto [node, constant] = extract_node_and_constant(fam, weight);
    MappedDisc omega = image_region(fam);
    QuadratureReport rep =
        weight >= 0 ? check_weighted_area_quadrature(Region(omega), weight, {node}, max_degree)
                    : check_boundary_quadrature(Region(omega), -weight / 2, {node}, max_degree);
    bool pass = univalent && rep.max_rel(2) <= tol;

    std::string fmt = pick_format(rc, "csv");
    std::string out = artifact_path(rc, fmt);
    if (fmt == "csv") {
        write_quadcheck_csv(rep, out);
    } else {
        SvgCurve curve;
        for (const auto& s : boundary_points(Region(omega), std::max(64, n / 8)))
            curve.points.push_back(s.point);
        write_svg({curve}, {node}, out);
    }
    emit({{"task", "conformal"},
          {"status", pass ? "ok" : "fail"},
          {"univalent", univalent},
          {"node_re", node.real()},
          {"node_im", node.imag()},
          {"constant_re", constant.real()},
          {"constant_im", constant.imag()},
          {"max_rel_residual", rep.max_rel(2)},
          {"artifact", out}});
    return pass ? 0 : 1;
}

int run_fekete(const RunConfig& rc) {
    int N = opt_int(rc.options, "N", 200);
    auto seed = static_cast<unsigned long long>(opt_int(rc.options, "seed", 1));
    FeketeOptions opts;
    opts.max_iter = opt_int(rc.options, "max_iter", 2000);
    opts.grad_tol = opt_num(rc.options, "grad_tol", opt_num(rc.options, "tol", 1e-7));
    opts.step0 = opt_num(rc.options, "step0", 0.0);

    FeketeState state = minimize(rc.field, N, seed, opts);
    SupportDescription sup = build_support(rc.field);

    std::string fmt = pick_format(rc, "csv");
    std::string out = artifact_path(rc, fmt);
    if (fmt == "csv") {
        write_points_csv(state.points, out);
    } else {
        std::vector<SvgCurve> curves;
        if (sup.regime != Regime::UNSUPPORTED) curves = support_curves(sup, 256);
        write_svg(curves, state.points, out);
    }
    json summary = {{"task", "fekete"},   {"status", "ok"},
                    {"N", N},             {"seed", seed},
                    {"energy", state.energy}, {"grad_norm", state.grad_norm},
                    {"iterations", state.iterations}, {"converged", state.converged},
                    {"artifact", out}};
    if (sup.regime != Regime::UNSUPPORTED) {
        SupportStats st = support_stats(state, sup);
        summary["inside_cavity"] = st.inside_cavity;
        summary["max_radius"] = st.max_radius;
        summary["offsupport_fraction"] = st.offsupport_fraction;
    }
    emit(summary);
    return 0;
}

int run_render(const RunConfig& rc) {
    SupportDescription sup = build_support(rc.field);
    if (sup.regime == Regime::UNSUPPORTED) {
        std::cerr << "render: unsupported regime\n";
        return 3;
    }
    int n = opt_int(rc.options, "n", 256);
    std::string fmt = pick_format(rc, "svg");
    std::string out = artifact_path(rc, fmt);
    std::vector<cplx> pts;
    if (rc.options.contains("N")) {
        int N = opt_int(rc.options, "N", 200);
        auto seed = static_cast<unsigned long long>(opt_int(rc.options, "seed", 1));
        pts = minimize(rc.field, N, seed).points;
    }
    if (fmt == "svg")
        write_svg(support_curves(sup, n), pts, out);
    else
        write_boundaries_csv(support_boundaries(sup, n), out);
    emit({{"task", "render"}, {"status", "ok"}, {"n_points", pts.size()}, {"artifact", out}});
    return 0;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UnsupportedRegimeError*>(&e)) return 3;
    if (dynamic_cast<const InvalidSourceError*>(&e)) return 3;
    if (dynamic_cast<const NewtonDivergenceError*>(&e)) return 3;
    if (dynamic_cast<const DegenerateRegionError*>(&e)) return 3;
    if (dynamic_cast<const ToleranceNotMetError*>(&e)) return 1;
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"equilibrium-measure supports for power fields with point sources"};
    app.require_subcommand(1);
    Flags fl;
    for (const char* name :
         {"support", "frostman", "quadcheck", "conformal", "fekete", "render"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", fl.config, "JSON config path")->required();
        sub->add_option("--out", fl.out, "artifact path override");
        sub->add_option("--format", fl.format, "artifact format")
            ->check(CLI::IsMember({"csv", "svg"}));
        sub->add_option("--seed", fl.seed, "seed override");
        sub->add_option("--tol", fl.tol, "tolerance override");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig rc = parse_config(fl.config);
        std::string sub = app.get_subcommands().at(0)->get_name();
        if (rc.task != sub)
            throw ConfigError("config task \"" + rc.task + "\" does not match subcommand \"" +
                              sub + "\"");
        if (!fl.out.empty()) rc.options["out"] = fl.out;
        if (!fl.format.empty()) rc.options["format"] = fl.format;
        if (fl.seed >= 0) {
            if (sub != "fekete" && sub != "render")
                throw ConfigError("--seed is not valid for task " + sub);
            rc.options["seed"] = fl.seed;
        }
        if (fl.tol > 0.0) {
            if (sub == "support" || sub == "render")
                throw ConfigError("--tol is not valid for task " + sub);
            rc.options["tol"] = fl.tol;
        }

        if (sub == "support") return run_support(rc);
        if (sub == "frostman") return run_frostman(rc);
        if (sub == "quadcheck") return run_quadcheck(rc);
        if (sub == "conformal") return run_conformal(rc);
        if (sub == "fekete") return run_fekete(rc);
        return run_render(rc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
