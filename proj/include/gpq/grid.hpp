#pragma once

#include <complex>
#include <vector>

#include "gpq/kernels.hpp"

namespace gpq {

using RVec = std::vector<double>;
using CVec = std::vector<cplx>;

struct Grid1D {
    double L = 30.0;
    int N = 4097;
    double h = 60.0 / 4096.0;

    double x(int i) const { return -L + i * h; }
    RVec nodes() const;
    std::size_t size() const { return static_cast<std::size_t>(N); }
};

Grid1D make_grid(double L, int N);

// throws NonFiniteField / a size mismatch as DomainError
void check_field(const CVec& u, const Grid1D& g);

RVec simpson_weights(const Grid1D& g);
double integrate(const RVec& f, const Grid1D& g);

// order 1 or 2; 4th-order stencils with one-sided closures on the outer two nodes
RVec differentiate(const RVec& f, const Grid1D& g, int order);
CVec differentiate(const CVec& f, const Grid1D& g, int order);

// e^{-i theta} u(x + a), cubic spline, constant continuation outside [-L, L]
CVec shift_phase(const CVec& u, const Grid1D& g, double a, double theta);

inline double pair(cplx f, cplx g) { return f.real() * g.real() + f.imag() * g.imag(); }

template <class Fn>
RVec sample_real(const Grid1D& g, Fn&& fn) {
    RVec out(g.size());
    for_nodes(g.size(), [&](std::size_t i) { out[i] = fn(g.x(static_cast<int>(i))); });
    return out;
}

template <class Fn>
CVec sample_complex(const Grid1D& g, Fn&& fn) {
    CVec out(g.size());
    for_nodes(g.size(), [&](std::size_t i) { out[i] = fn(g.x(static_cast<int>(i))); });
    return out;
}

// sup norm helpers
double sup_abs(const RVec& f);
double sup_abs(const CVec& f);
double sup_diff(const CVec& a, const CVec& b);

}  // namespace gpq
