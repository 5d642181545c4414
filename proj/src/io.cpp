#include "eqcavity/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace eqcavity {

using nlohmann::json;

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {
void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}
} // namespace

void write_boundaries_csv(const std::vector<std::vector<BoundarySample>>& curves,
                          const std::string& path) {
    std::string s = "region_id,theta,re,im\n";
    for (std::size_t r = 0; r < curves.size(); ++r) {
        std::size_t n = curves[r].size();
        for (std::size_t k = 0; k < n; ++k) {
            double theta = 2.0 * 3.14159265358979323846 * double(k) / double(n);
            s += std::to_string(r) + ',' + format17(theta) + ',' +
                 format17(curves[r][k].point.real()) + ',' +
                 format17(curves[r][k].point.imag()) + '\n';
        }
    }
    write_text(path, s);
}

void write_points_csv(const std::vector<cplx>& points, const std::string& path) {
    std::string s = "index,re,im\n";
    for (std::size_t i = 0; i < points.size(); ++i)
        s += std::to_string(i) + ',' + format17(points[i].real()) + ',' +
             format17(points[i].imag()) + '\n';
    write_text(path, s);
}

void write_frostman_csv(const std::vector<FrostmanRow>& rows, const std::string& path) {
    std::string s = "re,im,F,location\n";
    for (const auto& r : rows)
        s += format17(r.z.real()) + ',' + format17(r.z.imag()) + ',' + format17(r.F) + ',' +
             r.location + '\n';
    write_text(path, s);
}

void write_quadcheck_csv(const QuadratureReport& report, const std::string& path) {
    std::string s = "degree,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual\n";
    for (std::size_t k = 0; k < report.degrees.size(); ++k)
        s += std::to_string(report.degrees[k]) + ',' + format17(report.lhs[k].real()) + ',' +
             format17(report.lhs[k].imag()) + ',' + format17(report.rhs[k].real()) + ',' +
             format17(report.rhs[k].imag()) + ',' + format17(report.abs_residual[k]) + ',' +
             format17(report.rel_residual[k]) + '\n';
    write_text(path, s);
}

void write_svg(const std::vector<SvgCurve>& curves, const std::vector<cplx>& points,
               const std::string& path) {
    if (curves.empty() && points.empty())
        throw InvalidParameterError("write_svg: nothing to draw");

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    auto take = [&](cplx z) {
        xlo = std::min(xlo, z.real());
        xhi = std::max(xhi, z.real());
        ylo = std::min(ylo, -z.imag()); // y flipped
        yhi = std::max(yhi, -z.imag());
    };
    for (const auto& c : curves)
        for (cplx z : c.points) take(z);
    for (cplx z : points) take(z);
    if (xhi < xlo) throw InvalidParameterError("write_svg: empty curves");

    double w = xhi - xlo, h = yhi - ylo;
    double diam = std::hypot(w, h);
    if (diam == 0.0) diam = 1.0;
    double margin = 0.05 * std::max(w, h);
    if (margin == 0.0) margin = 0.05 * diam;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + format17(xlo - margin) +
         " " + format17(ylo - margin) + " " + format17(w + 2 * margin) + " " +
         format17(h + 2 * margin) + "\">\n";
    for (const auto& c : curves) {
        if (c.points.empty()) continue;
        s += "<path d=\"M " + format17(c.points[0].real()) + " " +
             format17(-c.points[0].imag());
        for (std::size_t k = 1; k < c.points.size(); ++k)
            s += " L " + format17(c.points[k].real()) + " " + format17(-c.points[k].imag());
        s += " Z\" stroke=\"black\" stroke-width=\"" + format17(0.005 * diam) + "\"";
        s += c.fill ? " fill=\"black\" fill-opacity=\"0.1\"" : " fill=\"none\"";
        s += "/>\n";
    }
    for (cplx z : points)
        s += "<circle cx=\"" + format17(z.real()) + "\" cy=\"" + format17(-z.imag()) +
             "\" r=\"" + format17(0.004 * diam) + "\" fill=\"black\"/>\n";
    s += "</svg>\n";
    write_text(path, s);
}

namespace {
const std::map<std::string, std::set<std::string>>& allowed_option_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"support", {"n", "out", "format"}},
        {"frostman", {"mode", "n_on", "n_off", "tol", "out", "format"}},
        {"quadcheck",
         {"check", "kappa", "max_degree", "alpha_re", "alpha_im", "tol", "out", "format"}},
        {"conformal",
         {"family", "map_p", "scale_re", "scale_im", "zeta0_re", "zeta0_im", "b_re", "b_im",
          "c_re", "c_im", "weight_exponent", "n", "max_degree", "tol", "out", "format"}},
        {"fekete", {"N", "seed", "max_iter", "grad_tol", "step0", "tol", "out", "format"}},
        {"render", {"n", "N", "seed", "out", "format"}},
    };
    return keys;
}
} // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "field" && it.key() != "task" && it.key() != "options")
            throw ConfigError("unknown config key: " + it.key());
    if (!j.contains("field") || !j.contains("task"))
        throw ConfigError("config needs \"field\" and \"task\"");

    RunConfig rc;
    try {
        const json& f = j.at("field");
        for (auto it = f.begin(); it != f.end(); ++it)
            if (it.key() != "C" && it.key() != "p" && it.key() != "sources")
                throw ConfigError("unknown field key: " + it.key());
        rc.field.strength = f.at("C").get<double>();
        rc.field.halfdegree = f.at("p").get<int>();
        if (f.contains("sources")) {
            for (const json& s : f.at("sources")) {
                for (auto it = s.begin(); it != s.end(); ++it)
                    if (it.key() != "re" && it.key() != "im" && it.key() != "q")
                        throw ConfigError("unknown source key: " + it.key());
                rc.field.sources.push_back(
                    {cplx(s.at("re").get<double>(), s.at("im").get<double>()),
                     s.at("q").get<double>()});
            }
        }
        rc.task = j.at("task").get<std::string>();
        rc.options = j.value("options", json::object());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }

    auto allowed = allowed_option_keys().find(rc.task);
    if (allowed == allowed_option_keys().end())
        throw ConfigError("unknown task: " + rc.task);
    if (!rc.options.is_object()) throw ConfigError("\"options\" must be an object");
    for (auto it = rc.options.begin(); it != rc.options.end(); ++it)
        if (!allowed->second.count(it.key()))
            throw ConfigError("option \"" + it.key() + "\" not valid for task " + rc.task);

    try {
        rc.field.validate();
    } catch (const InvalidParameterError& e) {
        throw ConfigError(std::string("invalid field: ") + e.what());
    }
    return rc;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json config_to_json(const RunConfig& config) {
    json f;
    f["C"] = config.field.strength;
    f["p"] = config.field.halfdegree;
    if (!config.field.sources.empty()) {
        json arr = json::array();
        for (const auto& s : config.field.sources)
            arr.push_back({{"re", s.location.real()},
                           {"im", s.location.imag()},
                           {"q", s.intensity}});
        f["sources"] = arr;
    }
    return json{{"field", f}, {"task", config.task}, {"options", config.options}};
}

} // namespace eqcavity
