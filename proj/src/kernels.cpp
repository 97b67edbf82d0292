#include "gpq/kernels.hpp"

#include <algorithm>
#include <array>
#include <atomic>

namespace gpq {

namespace {
std::atomic<Exec> g_exec{Exec::parallel};

inline double simpson_weight(std::size_t i, std::size_t n) {
    if (i == 0 || i + 1 == n) return 1.0;
    return (i % 2 == 1) ? 4.0 : 2.0;
}

inline cplx quintic(cplx v) {
    double r2 = std::norm(v);
    return (r2 * r2 - 1.0) * v;
}
}  // namespace

Exec exec() { return g_exec.load(std::memory_order_relaxed); }
void set_exec(Exec e) { g_exec.store(e, std::memory_order_relaxed); }

namespace kernels {

namespace serial {

double simpson(const double* f, std::size_t n, double h) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += simpson_weight(i, n) * f[i];
    return s * h / 3.0;
}

void d1_interior(const cplx* f, cplx* out, std::size_t n, double h) {
    const double k = 1.0 / (12.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * k;
}

void d2_interior(const cplx* f, cplx* out, std::size_t n, double h) {
    const double k = 1.0 / (12.0 * h * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * k;
}

void quintic_midpoint(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = quintic(0.5 * (a[i] + b[i]));
}

void axpby3(cplx alpha, const cplx* u, cplx beta, const cplx* lap, const cplx* f, cplx* out,
            std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * u[i] + beta * lap[i] + f[i];
}

}  // namespace serial

namespace par {

// Fixed chunking keeps the summation order independent of the thread count,
// so results are reproducible bit for bit.
double simpson(const double* f, std::size_t n, double h) {
    constexpr std::size_t chunks = 64;
    std::array<double, chunks> part{};
    const std::size_t len = (n + chunks - 1) / chunks;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        std::size_t lo = c * len, hi = std::min(n, lo + len);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += simpson_weight(i, n) * f[i];
        part[c] = s;
    }
    double s = 0.0;
    for (double p : part) s += p;
    return s * h / 3.0;
}

void d1_interior(const cplx* f, cplx* out, std::size_t n, double h) {
    const double k = 1.0 / (12.0 * h);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 2; i < static_cast<std::ptrdiff_t>(n) - 2; ++i)
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * k;
}

void d2_interior(const cplx* f, cplx* out, std::size_t n, double h) {
    const double k = 1.0 / (12.0 * h * h);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 2; i < static_cast<std::ptrdiff_t>(n) - 2; ++i)
        out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * k;
}

void quintic_midpoint(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        out[i] = quintic(0.5 * (a[i] + b[i]));
}

void axpby3(cplx alpha, const cplx* u, cplx beta, const cplx* lap, const cplx* f, cplx* out,
            std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        out[i] = alpha * u[i] + beta * lap[i] + f[i];
}

}  // namespace par

double simpson(const double* f, std::size_t n, double h) {
    return exec() == Exec::parallel ? par::simpson(f, n, h) : serial::simpson(f, n, h);
}
void d1_interior(const cplx* f, cplx* out, std::size_t n, double h) {
    exec() == Exec::parallel ? par::d1_interior(f, out, n, h) : serial::d1_interior(f, out, n, h);
}
void d2_interior(const cplx* f, cplx* out, std::size_t n, double h) {
    exec() == Exec::parallel ? par::d2_interior(f, out, n, h) : serial::d2_interior(f, out, n, h);
}
void quintic_midpoint(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    exec() == Exec::parallel ? par::quintic_midpoint(a, b, out, n)
                             : serial::quintic_midpoint(a, b, out, n);
}
void axpby3(cplx alpha, const cplx* u, cplx beta, const cplx* lap, const cplx* f, cplx* out,
            std::size_t n) {
    exec() == Exec::parallel ? par::axpby3(alpha, u, beta, lap, f, out, n)
                             : serial::axpby3(alpha, u, beta, lap, f, out, n);
}

}  // namespace kernels
}  // namespace gpq
