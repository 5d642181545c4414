#pragma once
#include <array>

#include "eqcavity/regions.hpp"

namespace eqcavity {

struct FeketeState {
    std::vector<cplx> points;
    double energy = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    unsigned long long seed = 0;
    bool converged = false;
};

struct FeketeOptions {
    int max_iter = 2000;
    double grad_tol = 1e-7;
    double step0 = 0.0; // <= 0: scaled from R and N
};

// sum_{i<j} ln 1/|x_i-x_j| + (N-1) sum_i V(x_i);
// throws CoincidentPointsError on equal points or a point at a source
double energy(const std::vector<cplx>& points, const FieldSpec& field);

// d(energy)/dx_i = -sum_{j != i} (x_i-x_j)/|x_i-x_j|^2 + (N-1) grad_V(x_i)
std::vector<std::array<double, 2>> energy_gradient(const std::vector<cplx>& points,
                                                   const FieldSpec& field);

// golden-angle spiral filling the base disc, plus seeded noise of amplitude
// 1e-3 R; redraws noise for any point that lands on a source
std::vector<cplx> initial_points(const FieldSpec& field, int N, unsigned long long seed);

// backtracking gradient descent (halve the step until the energy strictly
// decreases, grow it by 1.1 after an accepted move); deterministic for a
// given seed and independent of the thread count
FeketeState minimize(const FieldSpec& field, int N, unsigned long long seed,
                     const FeketeOptions& opts = {});
FeketeState minimize_from(const FieldSpec& field, std::vector<cplx> start,
                          unsigned long long seed, const FeketeOptions& opts = {});

struct SupportStats {
    int inside_cavity = 0;
    double max_radius = 0.0;
    double offsupport_fraction = 0.0;
};

// classifies points against the analytic support with a 1e-2 R band
// treated as on-support
SupportStats support_stats(const FeketeState& state, const SupportDescription& support);

} // namespace eqcavity
