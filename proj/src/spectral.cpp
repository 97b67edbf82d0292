#include "gpq/spectral.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <string>

#include "gpq/errors.hpp"
#include "gpq/solitons.hpp"

namespace gpq {

Pencil assemble_pencil(const Grid1D& g) {
    Pencil P;
    P.grid = g;
    const std::size_t n = g.size();
    const double ih = 1.0 / g.h;
    P.a_diag.assign(n, 2.0 * ih);
    P.a_diag.front() = P.a_diag.back() = ih;
    P.a_off.assign(n - 1, -ih);
    RVec w = simpson_weights(g);
    RVec eta = eta_black(g);
    P.b.resize(n);
    for (std::size_t i = 0; i < n; ++i) P.b[i] = w[i] * eta[i];
    P.phi0 = black_profile(g).first;
    return P;
}

RVec apply_A(const Pencil& P, const RVec& f) {
    const std::size_t n = f.size();
    RVec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = P.a_diag[i] * f[i];
        if (i > 0) s += P.a_off[i - 1] * f[i - 1];
        if (i + 1 < n) s += P.a_off[i] * f[i + 1];
        out[i] = s;
    }
    return out;
}

int count_below(const Pencil& P, double s) {
    const std::size_t n = P.b.size();
    int neg = 0;
    double d = P.a_diag[0] - s * P.b[0];
    const double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0;; ++i) {
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++neg;
        if (i + 1 == n) break;
        double e = P.a_off[i];
        d = (P.a_diag[i + 1] - s * P.b[i + 1]) - e * e / d;
    }
    return neg;
}

double sigma_to_lambda(double sigma) { return (sigma - 1.0) / (2.0 * (sigma + 1.0)); }
double lambda_to_sigma(double lambda) { return (1.0 + 2.0 * lambda) / (1.0 - 2.0 * lambda); }

namespace {
double dot(const RVec& a, const RVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double bdot(const Pencil& P, const RVec& f, const RVec& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += P.b[i] * f[i] * g[i];
    return s;
}

// k-th eigenvalue (0-based) by bisection on the inertia count
double bisect(const Pencil& P, int k) {
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (count_below(P, hi) <= k) {
        hi *= 2.0;
        if (++guard > 200) throw Error(Errc::EigenConvergenceFailure, "cannot bracket eigenvalue");
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (count_below(P, mid) <= k)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

RVec inverse_iteration(const Pencil& P, double s, const Grid1D& g) {
    const lapack_int n = static_cast<lapack_int>(P.b.size());
    RVec x(n);
    for (lapack_int i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * g.x(i) / g.L + 0.01 * std::sin(3.0 * g.x(i));
    const double shift = s - 1e-10 * (1.0 + std::abs(s));
    RVec prev;
    for (int it = 0; it < 50; ++it) {
        RVec dl(P.a_off), du(P.a_off), d(n), rhs(n);
        for (lapack_int i = 0; i < n; ++i) {
            d[i] = P.a_diag[i] - shift * P.b[i];
            rhs[i] = P.b[i] * x[i];
        }
        lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), rhs.data(), n);
        if (info != 0) throw Error(Errc::EigenConvergenceFailure, "tridiagonal solve failed");
        double nrm = std::sqrt(dot(rhs, rhs));
        for (auto& v : rhs) v /= nrm;
        // fix sign so comparisons between iterates make sense
        double ref = 0.0;
        for (lapack_int i = n - 1; i >= 0; --i)
            if (std::abs(rhs[i]) > 1e-6) {
                ref = rhs[i];
                break;
            }
        if (ref < 0.0)
            for (auto& v : rhs) v = -v;
        x = rhs;
        if (!prev.empty()) {
            double diff = 0.0;
            for (lapack_int i = 0; i < n; ++i) diff = std::max(diff, std::abs(x[i] - prev[i]));
            if (diff < 1e-13) return x;
        }
        prev = x;
    }
    return x;
}
}  // namespace

double inner0(const Pencil& P, const RVec& f, const RVec& g) { return dot(apply_A(P, f), g) + bdot(P, f, g); }

double pencil_Q0(const Pencil& P, const RVec& f) { return 0.5 * (dot(apply_A(P, f), f) - bdot(P, f, f)); }

SpectralResult solve_lowest(const Pencil& P, int k) {
    if (k < 1 || k > 10) throw Error(Errc::DomainError, "k must be in [1, 10]");
    SpectralResult r;
    for (int j = 0; j < k; ++j) {
        double s = bisect(P, j);
        RVec x = inverse_iteration(P, s, P.grid);
        double a = dot(apply_A(P, x), x), b = bdot(P, x, x);
        double sigma = a / b;
        if (!std::isfinite(sigma)) throw Error(Errc::EigenConvergenceFailure, "non-finite Rayleigh quotient");
        double nrm = std::sqrt(a + b);
        for (auto& v : x) v /= nrm;
        if (!r.sigma.empty() && !(sigma > r.sigma.back()))
            throw Error(Errc::EigenConvergenceFailure, "eigenvalues not simple at index " + std::to_string(j));
        r.sigma.push_back(sigma);
        r.lambda.push_back(sigma_to_lambda(sigma));
        r.fields.push_back(std::move(x));
    }
    return r;
}

RVec make_admissible(const Pencil& P, const RVec& f) {
    const std::size_t n = f.size();
    RVec one(n, 1.0);
    const RVec& p = P.phi0;
    // solve the 2x2 system so both weighted means vanish on the grid
    double a11 = bdot(P, one, one), a12 = bdot(P, one, p), a22 = bdot(P, p, p);
    double r1 = bdot(P, one, f), r2 = bdot(P, p, f);
    double det = a11 * a22 - a12 * a12;
    double al = (r1 * a22 - r2 * a12) / det;
    double be = (a11 * r2 - a12 * r1) / det;
    RVec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f[i] - al - be * p[i];
    return out;
}

bool coercivity_probe(const Pencil& P, const RVec& f, const SpectralResult& r) {
    if (r.lambda.size() < 3) throw Error(Errc::DomainError, "need at least three eigenpairs");
    return pencil_Q0(P, f) >= (r.lambda[2] - 1e-6) * inner0(P, f, f);
}

int sign_changes(const RVec& f, double thresh) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    int count = 0, last = 0;
    for (double v : f) {
        if (std::abs(v) <= thresh * m) continue;
        int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

}  // namespace gpq
