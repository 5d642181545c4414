#pragma once
#include <array>
#include <complex>
#include <vector>

#include "eqcavity/errors.hpp"

namespace eqcavity {

using cplx = std::complex<double>;

struct PointSource {
    cplx location;
    double intensity; // q_j > 0
};

// External field V(z) = (1+q) C |z|^{2p} + sum_j q_j ln 1/|z - z_j|,
// with Q(z) = C |z|^{2p} and q = sum q_j.
struct FieldSpec {
    double strength = 0.5;  // C
    int halfdegree = 1;     // p
    std::vector<PointSource> sources;

    double q_total() const;
    void validate() const; // throws InvalidParameterError
};

double eval_Q(const FieldSpec& f, cplx z);
// +infinity exactly at source locations (coordinate equality, no fuzz)
double eval_V(const FieldSpec& f, cplx z);
// 4 p^2 C |z|^{2p-2}
double laplacian_Q(const FieldSpec& f, cplx z);
// C p z^{p-1} conj(z)^p
cplx wirtinger_dQ(const FieldSpec& f, cplx z);
// gradient of eval_V; throws SourceSingularityError at a source
std::array<double, 2> grad_V(const FieldSpec& f, cplx z);

struct SupportDescription; // regions.hpp
// (1+q) laplacian_Q(z) / (2 pi) on S_V, else 0
double density_muV(const FieldSpec& f, const SupportDescription& s, cplx z);

} // namespace eqcavity
