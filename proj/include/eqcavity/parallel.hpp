#pragma once
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Data-parallel map + deterministic reduction kernels.
//
// Every hot loop in the library (quadrature node sums, Frostman sampling,
// the Fekete gradient) is a map over an index range followed by a sum.
// The OpenMP kernels fill a buffer in parallel -- one slot per index, no
// shared accumulator -- and reduce it with a fixed pairwise tree, so the
// result is bit-identical to the serial reference kernels below for any
// thread count. serial::map_sum is kept both as the reference for tests
// and as the comparison baseline for bench_kernels.

namespace eqcavity {

inline int max_threads() {
#ifdef _OPENMP
    int hw = omp_get_max_threads();
#else
    int hw = 1;
#endif
    if (const char* s = std::getenv("EQCAVITY_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && v >= 1 && v < 1024 && v < hw) hw = static_cast<int>(v);
    }
    return hw;
}

// Pairwise (tree) sum over buf[lo, hi). Fixed association independent of
// thread count; leaf blocks of 8 keep recursion shallow.
template <class T>
T pairwise_sum(const std::vector<T>& buf, std::size_t lo, std::size_t hi) {
    std::size_t n = hi - lo;
    if (n <= 8) {
        T s{};
        for (std::size_t i = lo; i < hi; ++i) s += buf[i];
        return s;
    }
    std::size_t mid = lo + n / 2;
    return pairwise_sum(buf, lo, mid) + pairwise_sum(buf, mid, hi);
}

template <class T>
T pairwise_sum(const std::vector<T>& buf) {
    return pairwise_sum(buf, 0, buf.size());
}

namespace serial {

template <class T, class F>
T map_sum(std::size_t n, F&& f) {
    std::vector<T> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = f(i);
    return pairwise_sum(buf);
}

template <class T, class F>
void map_fill(std::vector<T>& out, F&& f) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(i);
}

} // namespace serial

template <class T, class F>
T map_sum(std::size_t n, F&& f) {
    std::vector<T> buf(n);
#ifdef _OPENMP
    int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        buf[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i) buf[i] = f(i);
#endif
    return pairwise_sum(buf);
}

template <class T, class F>
void map_fill(std::vector<T>& out, F&& f) {
#ifdef _OPENMP
    int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(out.size()); ++i)
        out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(i);
#endif
}

} // namespace eqcavity
