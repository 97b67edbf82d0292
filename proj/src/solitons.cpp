#include "gpq/solitons.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "gpq/errors.hpp"

namespace gpq {

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

// tanh and sech^2 without overflow
inline void tanh_sech2(double y, double& T, double& S) {
    T = std::tanh(y);
    double a = std::abs(y);
    if (a > 300.0) {
        S = 4.0 * std::exp(-2.0 * a);
    } else {
        double ch = std::cosh(y);
        S = 1.0 / (ch * ch);
    }
}
}  // namespace

const char* side_name(Side s) { return s == Side::minus ? "minus" : "plus"; }

Side side_from_string(const std::string& s) {
    if (s == "minus" || s == "-" || s == "0-") return Side::minus;
    if (s == "plus" || s == "+" || s == "0+") return Side::plus;
    throw Error(Errc::ConfigError, "unknown branch side '" + s + "' (expected minus|plus)");
}

Side default_side(double c) { return c > 0.0 ? Side::plus : Side::minus; }

DarkParams dark_params(double c, Side side) {
    if (!(std::abs(c) < 2.0))
        throw Error(Errc::SpeedOutOfRange, "|c| must be < 2, got " + std::to_string(c));
    DarkParams p;
    p.c = c;
    p.side = side;
    p.kappa = std::sqrt(4.0 - c * c) / 2.0;
    // D = |c| * Dt and the mu1 numerator = 3c^2 (1 + 2/(s+2)); the common |c|
    // cancels, which keeps small speeds free of cancellation
    const double s = std::sqrt(3.0 * c * c + 4.0);
    const double Dt = std::sqrt(18.0 + 3.0 * (s * s + 2.0 * s + 4.0) / (s + 2.0));
    p.mu1 = 3.0 * std::abs(c) * (1.0 + 2.0 / (s + 2.0)) / Dt;
    p.mu2 = (c < 0.0 ? -3.0 : 3.0) * std::sqrt(4.0 - c * c) / Dt;
    p.mu = 0.5 * (p.mu1 * p.mu1 + p.mu2 * p.mu2) - 1.0;
    p.s1 = p.s2 = 1;
    p.resolved = false;
    return p;
}

DarkParams resolved_params(double c, Side side) {
    DarkParams p = dark_params(c, side);
    const double target = side == Side::minus ? 1.0 : -1.0;
    p.s2 = (p.mu2 * target > 0.0) ? 1 : -1;
    p.s1 = p.s2;
    p.resolved = true;
    return p;
}

DarkParams black_params() { return resolved_params(0.0, Side::minus); }

ProfilePoint eval_profile(const DarkParams& p, double x) {
    const double m1 = p.m1(), m2 = p.m2(), mu = p.mu, k = p.kappa;
    double T, S;
    tanh_sech2(k * x, T, S);
    const double den = 1.0 + mu * T * T;
    const double sq = std::sqrt(den);
    ProfilePoint r;
    r.phi = cplx(m2 * T, m1) / (kSqrt2 * sq);
    const double w = m2 * m2 - 2.0 * mu;
    r.omega = w * S / (2.0 * den);
    r.eta = r.omega * (2.0 - r.omega);
    const cplx num(m2, -mu * m1 * T);
    r.dphi = k * S * num / (kSqrt2 * den * sq);
    r.q = kSqrt2 * k * num / (sq * w * (2.0 - r.omega));
    return r;
}

double phi0(double x) {
    double T = std::tanh(x);
    return kSqrt2 * T / std::sqrt(3.0 - T * T);
}

double omega0(double x) {
    double T, S;
    tanh_sech2(x, T, S);
    return 3.0 * S / (3.0 - T * T);
}

double eta0(double x) {
    double w = omega0(x);
    return w * (2.0 - w);
}

double dphi0(double x) {
    double f = phi0(x);
    double q0 = std::sqrt(2.0 + f * f) / (1.0 + f * f);
    return q0 * eta0(x) / kSqrt3;
}

double d2phi0(double x) {
    double T, S;
    tanh_sech2(x, T, S);
    double d = 3.0 - T * T;
    return -3.0 * kSqrt2 * T * S * (3.0 + T * T) / (d * d * std::sqrt(d));
}

std::pair<RVec, RVec> black_profile(const Grid1D& g) {
    return {sample_real(g, phi0), sample_real(g, dphi0)};
}

RVec eta_black(const Grid1D& g) { return sample_real(g, eta0); }

namespace {
void require_resolved(const DarkParams& p) {
    if (!p.resolved) throw Error(Errc::UnresolvedBranch, "run sign_branch_search first");
}
}  // namespace

CVec dark_profile(const Grid1D& g, const DarkParams& p) {
    require_resolved(p);
    return sample_complex(g, [&](double x) { return eval_profile(p, x).phi; });
}

CVec dark_derivative(const Grid1D& g, const DarkParams& p) {
    require_resolved(p);
    return sample_complex(g, [&](double x) { return eval_profile(p, x).dphi; });
}

CVec weight_q(const Grid1D& g, const DarkParams& p) {
    require_resolved(p);
    return sample_complex(g, [&](double x) { return eval_profile(p, x).q; });
}

RVec eta_weight(const Grid1D& g, const DarkParams& p) {
    require_resolved(p);
    return sample_real(g, [&](double x) { return eval_profile(p, x).eta; });
}

RVec omega_weight(const Grid1D& g, const DarkParams& p) {
    require_resolved(p);
    return sample_real(g, [&](double x) { return eval_profile(p, x).omega; });
}

ProfileFields profile_fields(const Grid1D& g, const DarkParams& p) {
    require_resolved(p);
    ProfileFields f;
    f.phi.resize(g.size());
    f.dphi.resize(g.size());
    f.q.resize(g.size());
    f.eta.resize(g.size());
    for_nodes(g.size(), [&](std::size_t i) {
        auto r = eval_profile(p, g.x(static_cast<int>(i)));
        f.phi[i] = r.phi;
        f.dphi[i] = r.dphi;
        f.q[i] = r.q;
        f.eta[i] = r.eta;
    });
    return f;
}

ProfileFields profile_c_derivative(const Grid1D& g, const DarkParams& p, double dc) {
    auto lo = profile_fields(g, resolved_params(p.c - dc, p.side));
    auto hi = profile_fields(g, resolved_params(p.c + dc, p.side));
    ProfileFields d;
    const double s = 1.0 / (2.0 * dc);
    d.phi.resize(g.size());
    d.dphi.resize(g.size());
    d.q.resize(g.size());
    d.eta.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        d.phi[i] = (hi.phi[i] - lo.phi[i]) * s;
        d.dphi[i] = (hi.dphi[i] - lo.dphi[i]) * s;
        d.q[i] = (hi.q[i] - lo.q[i]) * s;
        d.eta[i] = (hi.eta[i] - lo.eta[i]) * s;
    }
    return d;
}

double traveling_residual_fd(const Grid1D& g, const DarkParams& p) {
    DarkParams q = p;
    q.resolved = true;
    auto f = profile_fields(g, q);
    CVec d2 = differentiate(f.phi, g, 2);
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx r = d2[i] - cplx(0.0, p.c) * f.dphi[i] + f.eta[i] * f.phi[i];
        m = std::max(m, std::abs(r));
    }
    return m;
}

Residuals residuals(const Grid1D& g, const DarkParams& p) {
    require_resolved(p);
    Residuals r;
    if (p.c == 0.0) {
        const double sgn = p.m2() > 0.0 ? 1.0 : -1.0;
        for (int i = 0; i < g.N; ++i) {
            double x = g.x(i);
            double f = sgn * phi0(x), d1 = sgn * dphi0(x), d2 = sgn * d2phi0(x);
            double w = omega0(x), e = w * (2.0 - w);
            double st = std::abs(d2 + e * f);
            double fo = std::abs(d1 * d1 - w * w * (2.0 + f * f) / 3.0);
            r.sup_stationary = std::max(r.sup_stationary, st);
            r.sup_first_order = std::max(r.sup_first_order, fo);
        }
        r.sup_traveling = r.sup_stationary;
        return r;
    }
    auto f = profile_fields(g, p);
    CVec d2 = differentiate(f.phi, g, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx st = d2[i] + f.eta[i] * f.phi[i];
        cplx tr = st - cplx(0.0, p.c) * f.dphi[i];
        r.sup_stationary = std::max(r.sup_stationary, std::abs(st));
        r.sup_traveling = std::max(r.sup_traveling, std::abs(tr));
    }
    r.sup_first_order = std::numeric_limits<double>::quiet_NaN();
    return r;
}

DarkParams sign_branch_search(DarkParams p, const Grid1D& g) {
    const double target = p.side == Side::minus ? 1.0 : -1.0;
    double best = std::numeric_limits<double>::infinity();
    double best_any = best;
    DarkParams chosen = p;
    bool found = false;
    for (int s2 : {1, -1}) {
        for (int s1 : {1, -1}) {
            DarkParams q = p;
            q.s1 = s1;
            q.s2 = s2;
            q.resolved = true;
            double res = traveling_residual_fd(g, q);
            best_any = std::min(best_any, res);
            if (res > 1e-4) continue;
            if (q.m2() * target <= 0.0) continue;  // wrong c -> 0 limit
            // (s1, s2) and (-s1, -s2) tie exactly; prefer s1 == s2, then lower residual
            bool better = !found || res < best || (res == best && s1 == s2 && chosen.s1 != chosen.s2);
            if (better) {
                best = res;
                chosen = q;
                found = true;
            }
        }
    }
    if (!found)
        throw Error(Errc::BranchResolutionFailure,
                    "no sign choice passes at c = " + std::to_string(p.c) +
                        " (min residual " + std::to_string(best_any) + ")");
    return chosen;
}

double atan_ratio(double mu) {
    if (mu > 0.0) {
        double s = std::sqrt(mu);
        return std::atan(s) / s;
    }
    if (mu < 0.0) {
        double s = std::sqrt(-mu);
        return std::atanh(s) / s;
    }
    return 1.0;
}

namespace {
// arctan(sqrt(X/Y)) / sqrt(X Y), continued to X < 0
double atan_pair(double X, double Y) {
    if (X > 0.0) return std::atan(std::sqrt(X / Y)) / std::sqrt(X * Y);
    if (X < 0.0) return std::atanh(std::sqrt(-X / Y)) / std::sqrt(-X * Y);
    return 1.0 / Y;
}
}  // namespace

ClosedFormCatalog closed_forms(const DarkParams& p) {
    require_resolved(p);
    const double m1 = p.m1(), m2 = p.m2(), mu = p.mu, k = p.kappa;
    const double a1 = m1 * m1, a2 = m2 * m2;
    const double t = atan_ratio(mu);
    ClosedFormCatalog cf;

    double s1 = (2.0 * mu * (mu + 3.0) - a2 * (mu - 1.0)) * (a2 * a2 - 4.0 * a2 * mu + 4.0 * mu * (mu + k * k));
    double s2n = 12.0 * mu * k * k * (a1 * (mu - 3.0) * mu + a2 * (3.0 * mu - 1.0)) -
                 (a1 - 2.0) * (a1 - 2.0) *
                     (a2 * (3.0 * mu * mu - 2.0 * mu + 3.0) - 2.0 * mu * (3.0 * mu * mu + 10.0 * mu - 9.0));
    cf.E2_dark = (s1 + s2n * t / 3.0) / (32.0 * k * mu * mu);

    cf.P_dark = -std::atan(m1 / m2) - m1 * m2 * t;

    cf.grad_L2 = k * (a2 + 3.0 * (a1 + a2) * mu + a1 * mu * mu) / (8.0 * mu * (1.0 + mu)) +
                 k * (-a2 - 3.0 * (a1 - a2) * mu + a1 * mu * mu) / (8.0 * mu) * t;

    const double X = 2.0 * mu + a2, Y = 2.0 + a1;
    cf.dphi_over_sqrt_etac_L2sq =
        4.0 * k / (a1 - 2.0) * (mu * t - (a2 + 2.0 * mu + mu * a1) * atan_pair(X, Y));

    cf.sup_dphi_over_sqrt_eta0_sq = 0.5 * k * k * a2;
    cf.sup_Ic = std::abs(m1) / std::sqrt(2.0 + 2.0 * mu);
    return cf;
}

double E2_black() { return 2.0 * kSqrt3 * std::atanh(1.0 / kSqrt3); }
double mass_black() { return kSqrt3 * std::log(2.0 + kSqrt3); }

LemmaValues lemma_quadrature_identity(double b, double y) {
    if (!(b > 0.0) || !(std::abs(y) < b) || !(y * y < b))
        throw Error(Errc::DomainError, "need b > 0, |y| < b and y^2 < b (b=" + std::to_string(b) +
                                           ", y=" + std::to_string(y) + ")");
    auto f = [b](double s) { return 1.0 / ((b - s * s) * std::sqrt(s * s + 2.0 * b)); };
    LemmaValues v{};
    if (y == 0.0) return v;
    double err = 0.0;
    v.lhs = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, y, 30, 1e-14, &err);
    double r = std::sqrt(2.0 * b + y * y), s3 = kSqrt3 * y;
    v.rhs = std::log((r + s3) / (r - s3)) / (2.0 * b * kSqrt3);
    return v;
}

}  // namespace gpq
