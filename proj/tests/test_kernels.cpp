#include <doctest.h>

#include <cmath>

#include "gpq/grid.hpp"
#include "gpq/kernels.hpp"

using namespace gpq;

namespace {
CVec wave(std::size_t n, double s) {
    CVec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = {std::tanh(s * double(i) - 3.0), std::sin(0.01 * double(i))};
    return u;
}
double maxdiff(const CVec& a, const CVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}
}  // namespace

TEST_CASE("serial and parallel kernels agree") {
    const std::size_t n = 10001;
    CVec a = wave(n, 1e-3), b = wave(n, 2e-3), lap = wave(n, 5e-4);
    CVec s(n), p(n);

    kernels::serial::quintic_midpoint(a.data(), b.data(), s.data(), n);
    kernels::par::quintic_midpoint(a.data(), b.data(), p.data(), n);
    CHECK(maxdiff(s, p) == 0.0);

    // interior only; edges are left to the caller
    s.assign(n, 0.0);
    p.assign(n, 0.0);
    kernels::serial::d2_interior(a.data(), s.data(), n, 0.01);
    kernels::par::d2_interior(a.data(), p.data(), n, 0.01);
    CHECK(maxdiff(s, p) == 0.0);
    kernels::serial::d1_interior(a.data(), s.data(), n, 0.01);
    kernels::par::d1_interior(a.data(), p.data(), n, 0.01);
    CHECK(maxdiff(s, p) == 0.0);

    kernels::serial::axpby3({1.0, 0.5}, a.data(), {0.0, -0.25}, lap.data(), b.data(), s.data(), n);
    kernels::par::axpby3({1.0, 0.5}, a.data(), {0.0, -0.25}, lap.data(), b.data(), p.data(), n);
    CHECK(maxdiff(s, p) == 0.0);

    RVec f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(-1e-6 * double(i * i));
    double ss = kernels::serial::simpson(f.data(), n, 0.01), ps = kernels::par::simpson(f.data(), n, 0.01);
    CHECK(std::abs(ss - ps) <= 1e-13 * std::abs(ss));
}

TEST_CASE("quintic nonlinearity vanishes on the unit circle") {
    CVec a(4), out(4);
    for (int k = 0; k < 4; ++k) a[k] = std::exp(cplx(0.0, 0.9 * k));
    kernels::quintic_midpoint(a.data(), a.data(), out.data(), 4);
    for (auto v : out) CHECK(std::abs(v) <= 1e-15);
}

TEST_CASE("exec policy switch") {
    Exec before = exec();
    {
        ExecScope s(Exec::serial);
        CHECK(exec() == Exec::serial);
        Grid1D g = make_grid(30.0, 4097);
        RVec f = sample_real(g, [](double x) { return 1.0 / std::cosh(x); });
        ExecScope t(Exec::parallel);
        RVec h = sample_real(g, [](double x) { return 1.0 / std::cosh(x); });
        CHECK(f == h);
    }
    CHECK(exec() == before);
}
