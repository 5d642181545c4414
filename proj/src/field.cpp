#include "eqcavity/field.hpp"

#include <cmath>
#include <limits>

#include "eqcavity/regions.hpp"

namespace eqcavity {

double FieldSpec::q_total() const {
    double q = 0.0;
    for (const auto& s : sources) q += s.intensity;
    return q;
}

void FieldSpec::validate() const {
    if (!(strength > 0.0)) throw InvalidParameterError("field strength C must be > 0");
    if (halfdegree < 1) throw InvalidParameterError("halfdegree p must be >= 1");
    for (const auto& s : sources)
        if (!(s.intensity > 0.0)) throw InvalidParameterError("source intensity must be > 0");
    for (std::size_t i = 0; i < sources.size(); ++i)
        for (std::size_t j = i + 1; j < sources.size(); ++j)
            if (sources[i].location == sources[j].location)
                throw InvalidParameterError("source locations must be pairwise distinct");
}

double eval_Q(const FieldSpec& f, cplx z) {
    return f.strength * std::pow(std::abs(z), 2.0 * f.halfdegree);
}

double eval_V(const FieldSpec& f, cplx z) {
    double v = (1.0 + f.q_total()) * eval_Q(f, z);
    for (const auto& s : f.sources) {
        if (z == s.location) return std::numeric_limits<double>::infinity();
        v -= s.intensity * std::log(std::abs(z - s.location));
    }
    return v;
}

double laplacian_Q(const FieldSpec& f, cplx z) {
    double p = f.halfdegree;
    return 4.0 * p * p * f.strength * std::pow(std::abs(z), 2.0 * p - 2.0);
}

cplx wirtinger_dQ(const FieldSpec& f, cplx z) {
    double p = f.halfdegree;
    cplx zb = std::conj(z);
    return f.strength * p * std::pow(z, f.halfdegree - 1) * std::pow(zb, f.halfdegree);
}

std::array<double, 2> grad_V(const FieldSpec& f, cplx z) {
    double p = f.halfdegree;
    double amp = (1.0 + f.q_total()) * 2.0 * p * f.strength *
                 std::pow(std::abs(z), 2.0 * p - 2.0);
    double gx = amp * z.real(), gy = amp * z.imag();
    for (const auto& s : f.sources) {
        if (z == s.location)
            throw SourceSingularityError("grad_V evaluated at a source location");
        cplx d = z - s.location;
        double r2 = std::norm(d);
        gx -= s.intensity * d.real() / r2;
        gy -= s.intensity * d.imag() / r2;
    }
    return {gx, gy};
}

double density_muV(const FieldSpec& f, const SupportDescription& s, cplx z) {
    if (!support_contains(s, z)) return 0.0;
    const double pi = 3.14159265358979323846;
    return (1.0 + f.q_total()) * laplacian_Q(f, z) / (2.0 * pi);
}

} // namespace eqcavity
