// Timing harness for the map/reduce kernels: serial reference vs OpenMP,
// asserting bit-identical sums. Run with --quick for the ctest smoke mode.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "eqcavity/field.hpp"
#include "eqcavity/parallel.hpp"

using namespace eqcavity;

namespace {
constexpr double pi = 3.14159265358979323846;

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double best_of(int reps, F&& f, double& result) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_s();
        result = f();
        best = std::min(best, now_s() - t0);
    }
    return best;
}
} // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && 0 == std::strcmp(argv[1], "--quick");
    std::size_t n = quick ? (1u << 16) : (1u << 21);
    int reps = quick ? 2 : 5;

    FieldSpec field;
    field.strength = 0.02;
    field.halfdegree = 2;
    field.sources = {{cplx(1.0, 0.0), 0.05}, {cplx(-1.0, 0.0), 0.05}};

    auto quad_kernel = [&](std::size_t i) {
        double th = 2.0 * pi * double(i) / double(n);
        cplx z = std::polar(1.0 + 0.3 * std::sin(7.0 * th), th);
        return laplacian_Q(field, z) * (1.5 + std::cos(th));
    };

    double sum_serial = 0.0, sum_par = 0.0;
    double ts = best_of(reps, [&] { return serial::map_sum<double>(n, quad_kernel); },
                        sum_serial);
    double tp = best_of(reps, [&] { return map_sum<double>(n, quad_kernel); }, sum_par);
    bool same_sum = std::memcmp(&sum_serial, &sum_par, sizeof(double)) == 0;

    std::size_t N = quick ? 200 : 800;
    std::vector<cplx> pts(N);
    for (std::size_t i = 0; i < N; ++i)
        pts[i] = std::polar(std::sqrt((i + 0.5) / double(N)), 2.39996 * double(i));
    auto grad_kernel = [&](std::size_t i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            if (j == i) continue;
            cplx d = pts[i] - pts[j];
            acc -= d / std::norm(d);
        }
        return acc;
    };
    std::vector<cplx> gs(N), gp(N);
    double dummy = 0.0;
    double gs_t = best_of(reps, [&] { serial::map_fill(gs, grad_kernel); return 0.0; }, dummy);
    double gp_t = best_of(reps, [&] { map_fill(gp, grad_kernel); return 0.0; }, dummy);
    bool same_grad = std::memcmp(gs.data(), gp.data(), N * sizeof(cplx)) == 0;

    std::printf("threads=%d\n", max_threads());
    std::printf("map_sum  n=%zu  serial %.4fs  parallel %.4fs  speedup %.2fx  bitwise=%s\n",
                n, ts, tp, ts / tp, same_sum ? "yes" : "NO");
    std::printf("map_fill N=%zu  serial %.4fs  parallel %.4fs  speedup %.2fx  bitwise=%s\n",
                N, gs_t, gp_t, gs_t / gp_t, same_grad ? "yes" : "NO");
    return (same_sum && same_grad) ? 0 : 1;
}
