#pragma once
#include <string>

#include <json.hpp>

#include "eqcavity/quadcheck.hpp"

namespace eqcavity {

// %.17g — enough digits to round-trip a double
std::string format17(double v);

// CSV emitters. LF line endings, headers always present, 17 significant
// digits; byte-identical for identical inputs.
void write_boundaries_csv(const std::vector<std::vector<BoundarySample>>& curves,
                          const std::string& path);
void write_points_csv(const std::vector<cplx>& points, const std::string& path);

struct FrostmanRow {
    cplx z;
    double F;
    std::string location; // "on", "exterior", "cavity"
};
void write_frostman_csv(const std::vector<FrostmanRow>& rows, const std::string& path);
void write_quadcheck_csv(const QuadratureReport& report, const std::string& path);

struct SvgCurve {
    std::vector<cplx> points;
    bool fill = false; // cavities are filled at 10% opacity
};
// Standalone SVG, viewBox = bounding box + 5% margin, y axis flipped to
// mathematical orientation, curves first then point circles.
void write_svg(const std::vector<SvgCurve>& curves, const std::vector<cplx>& points,
               const std::string& path);

struct RunConfig {
    FieldSpec field;
    std::string task;
    nlohmann::json options; // object; keys restricted per task
};

// Throws ConfigError on malformed JSON, unknown task, unknown option keys,
// or a field that fails validation.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path); // IoError if unreadable
nlohmann::json config_to_json(const RunConfig& config);

} // namespace eqcavity
