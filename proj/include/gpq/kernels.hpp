#pragma once

// Nodewise hot loops. Every kernel has a plain serial version (the reference
// used by tests) and an OpenMP version; `exec()` picks which one the rest of
// the library calls.

#include <complex>
#include <cstddef>

namespace gpq {

using cplx = std::complex<double>;

enum class Exec { serial, parallel };

Exec exec();
void set_exec(Exec e);

// RAII switch, handy in tests and benchmarks
struct ExecScope {
    explicit ExecScope(Exec e) : saved(exec()) { set_exec(e); }
    ~ExecScope() { set_exec(saved); }
    Exec saved;
};

namespace kernels {

// composite Simpson sum, n odd
double simpson(const double* f, std::size_t n, double h);

// 4th-order centered second/first difference on interior nodes [2, n-2)
void d1_interior(const cplx* f, cplx* out, std::size_t n, double h);
void d2_interior(const cplx* f, cplx* out, std::size_t n, double h);

// out[i] = (|v|^4 - 1) v with v = (a[i] + b[i]) / 2
void quintic_midpoint(const cplx* a, const cplx* b, cplx* out, std::size_t n);

// out[i] = alpha * u[i] + beta * lap[i] + f[i]
void axpby3(cplx alpha, const cplx* u, cplx beta, const cplx* lap, const cplx* f, cplx* out,
            std::size_t n);

namespace serial {
double simpson(const double* f, std::size_t n, double h);
void d1_interior(const cplx* f, cplx* out, std::size_t n, double h);
void d2_interior(const cplx* f, cplx* out, std::size_t n, double h);
void quintic_midpoint(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void axpby3(cplx alpha, const cplx* u, cplx beta, const cplx* lap, const cplx* f, cplx* out,
            std::size_t n);
}  // namespace serial

namespace par {
double simpson(const double* f, std::size_t n, double h);
void d1_interior(const cplx* f, cplx* out, std::size_t n, double h);
void d2_interior(const cplx* f, cplx* out, std::size_t n, double h);
void quintic_midpoint(const cplx* a, const cplx* b, cplx* out, std::size_t n);
void axpby3(cplx alpha, const cplx* u, cplx beta, const cplx* lap, const cplx* f, cplx* out,
            std::size_t n);
}  // namespace par

}  // namespace kernels

// Apply fn(i) for i in [0, n) under the current execution policy.
template <class Fn>
void for_nodes(std::size_t n, Fn&& fn) {
    if (exec() == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) fn(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) fn(i);
    }
}

}  // namespace gpq
