#include "gpq/grid.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <string>

#include "gpq/errors.hpp"

namespace gpq {

Grid1D make_grid(double L, int N) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw Error(Errc::NonPositiveWidth, "half width L must be positive, got " + std::to_string(L));
    if (N % 2 == 0 || N < 9)
        throw Error(Errc::EvenPointCount, "N must be odd and >= 9, got " + std::to_string(N));
    Grid1D g;
    g.L = L;
    g.N = N;
    g.h = 2.0 * L / (N - 1);
    return g;
}

RVec Grid1D::nodes() const {
    RVec x(size());
    for (int i = 0; i < N; ++i) x[i] = this->x(i);
    return x;
}

void check_field(const CVec& u, const Grid1D& g) {
    if (u.size() != g.size())
        throw Error(Errc::DomainError, "field has " + std::to_string(u.size()) + " samples, grid has " +
                                           std::to_string(g.N));
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!std::isfinite(u[i].real()) || !std::isfinite(u[i].imag()))
            throw Error(Errc::NonFiniteField, "non-finite sample at node " + std::to_string(i));
}

RVec simpson_weights(const Grid1D& g) {
    RVec w(g.size());
    for (int i = 0; i < g.N; ++i) {
        double c = (i == 0 || i == g.N - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        w[i] = c * g.h / 3.0;
    }
    return w;
}

double integrate(const RVec& f, const Grid1D& g) { return kernels::simpson(f.data(), f.size(), g.h); }

namespace {

void closures(const CVec& f, CVec& d, double h, int order) {
    const std::size_t n = f.size();
    const std::size_t m = n - 1;
    if (order == 1) {
        const double k = 1.0 / (12.0 * h);
        d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * k;
        d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * k;
        d[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) * k;
        d[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) * k;
    } else {
        const double k = 1.0 / (12.0 * h * h);
        auto edge0 = [&](std::size_t a, int s) {
            auto F = [&](int j) { return f[a + s * j]; };
            return (45.0 * F(0) - 154.0 * F(1) + 214.0 * F(2) - 156.0 * F(3) + 61.0 * F(4) - 10.0 * F(5)) * k;
        };
        auto edge1 = [&](std::size_t a, int s) {
            auto F = [&](int j) { return f[a + s * j]; };
            return (10.0 * F(0) - 15.0 * F(1) - 4.0 * F(2) + 14.0 * F(3) - 6.0 * F(4) + F(5)) * k;
        };
        d[0] = edge0(0, 1);
        d[1] = edge1(0, 1);
        d[m] = edge0(m, -1);
        d[m - 1] = edge1(m, -1);
    }
}

}  // namespace

CVec differentiate(const CVec& f, const Grid1D& g, int order) {
    if (order != 1 && order != 2) throw Error(Errc::DomainError, "derivative order must be 1 or 2");
    CVec d(f.size());
    if (order == 1)
        kernels::d1_interior(f.data(), d.data(), f.size(), g.h);
    else
        kernels::d2_interior(f.data(), d.data(), f.size(), g.h);
    closures(f, d, g.h, order);
    return d;
}

RVec differentiate(const RVec& f, const Grid1D& g, int order) {
    CVec c(f.begin(), f.end());
    CVec d = differentiate(c, g, order);
    RVec out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].real();
    return out;
}

CVec shift_phase(const CVec& u, const Grid1D& g, double a, double theta) {
    const cplx rot = std::polar(1.0, -theta);
    const std::size_t n = u.size();
    CVec out(n);

    double k = a / g.h;
    if (std::abs(k - std::round(k)) < 1e-12) {
        long s = std::lround(k);
        for (std::size_t i = 0; i < n; ++i) {
            long j = static_cast<long>(i) + s;
            j = std::clamp(j, 0L, static_cast<long>(n) - 1);
            out[i] = rot * u[j];
        }
        return out;
    }

    RVec re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = u[i].real();
        im[i] = u[i].imag();
    }
    using boost::math::interpolators::cardinal_cubic_b_spline;
    cardinal_cubic_b_spline<double> sr(re.data(), n, -g.L, g.h);
    cardinal_cubic_b_spline<double> si(im.data(), n, -g.L, g.h);
    for_nodes(n, [&](std::size_t i) {
        double y = g.x(static_cast<int>(i)) + a;
        cplx v;
        if (y <= -g.L)
            v = u.front();
        else if (y >= g.L)
            v = u.back();
        else
            v = cplx(sr(y), si(y));
        out[i] = rot * v;
    });
    return out;
}

double sup_abs(const RVec& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double sup_abs(const CVec& f) {
    double m = 0.0;
    for (auto v : f) m = std::max(m, std::abs(v));
    return m;
}

double sup_diff(const CVec& a, const CVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace gpq
