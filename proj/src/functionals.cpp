#include "gpq/functionals.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gpq/errors.hpp"

namespace gpq {

namespace {
constexpr double kPi = std::numbers::pi;

double smoothstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double dsmoothstep(double t) { return 30.0 * t * t * (t - 1.0) * (t - 1.0); }
}  // namespace

double cutoff(double x) {
    double a = std::abs(x);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    return 1.0 - smoothstep(a - 1.0);
}

double cutoff_derivative(double x) {
    double a = std::abs(x);
    if (a <= 1.0 || a >= 2.0) return 0.0;
    return -dsmoothstep(a - 1.0) * (x > 0.0 ? 1.0 : -1.0);
}

CutoffProfile make_cutoff(const Grid1D& g) {
    return {sample_real(g, cutoff), sample_real(g, cutoff_derivative)};
}

CVec to_complex(const RVec& f) { return CVec(f.begin(), f.end()); }

PerturbationView make_perturbation(const CVec& u, const Grid1D& g, const DarkParams& p) {
    CVec phi = dark_profile(g, p);
    PerturbationView v;
    v.params = p;
    v.z.resize(u.size());
    v.rho.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        v.z[i] = u[i] - phi[i];
        v.rho[i] = std::norm(u[i]) - std::norm(phi[i]);
    }
    return v;
}

double mass(const CVec& u, const Grid1D& g) {
    RVec f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = 1.0 - std::norm(u[i]);
    return integrate(f, g);
}

double E2(const CVec& u, const Grid1D& g) {
    CVec du = differentiate(u, g, 1);
    RVec f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double r = std::norm(u[i]), w = 1.0 - r;
        f[i] = std::norm(du[i]) + w * w * (2.0 + r) / 3.0;
    }
    return integrate(f, g);
}

RVec unwrapped_phase(const CVec& u, const Grid1D& g) {
    const int n = g.N;
    RVec ph(g.size(), std::nan(""));
    auto raw = [&](int i) {
        double re = u[i].real(), im = u[i].imag();
        if (re == 0.0) return im >= 0.0 ? kPi / 2.0 : -kPi / 2.0;
        return std::atan(im / re);
    };
    auto walk = [&](int start, int stop, int dir) {
        ph[start] = raw(start);
        for (int i = start + dir; i != stop; i += dir) {
            double prev = ph[i - dir];
            double a = raw(i);
            a -= kPi * std::round((a - prev) / kPi);
            if (std::abs(a - prev) > kPi / 2.0)
                throw Error(Errc::UnwrapAmbiguity, "phase jump at node " + std::to_string(i));
            ph[i] = a;
        }
    };
    int r0 = 0;
    while (r0 < n && g.x(r0) <= 1.0) ++r0;
    int l0 = n - 1;
    while (l0 >= 0 && g.x(l0) >= -1.0) --l0;
    if (r0 >= n || l0 < 0) throw Error(Errc::DomainError, "grid does not extend beyond |x| = 1");
    walk(r0, n, 1);
    walk(l0, -1, -1);

    // pin: |phase| < pi/2 on [1,2], |phase - pi| < pi/2 on [-2,-1]
    double kr = std::round(ph[r0] / kPi);
    for (int i = r0; i < n; ++i) ph[i] -= kr * kPi;
    double kl = std::round((ph[l0] - kPi) / kPi);
    for (int i = l0; i >= 0; --i) ph[i] -= kl * kPi;
    for (int i = 0; i < n; ++i) {
        double x = g.x(i);
        if (x >= 1.0 && x <= 2.0 && !(std::abs(ph[i]) < kPi / 2.0))
            throw Error(Errc::UnwrapAmbiguity, "phase cannot be pinned on [1,2]");
        if (x <= -1.0 && x >= -2.0 && !(std::abs(ph[i] - kPi) < kPi / 2.0))
            throw Error(Errc::UnwrapAmbiguity, "phase cannot be pinned on [-2,-1]");
    }
    return ph;
}

namespace {
void require_off_vacuum(const CVec& u, const Grid1D& g) {
    for (int i = 0; i < g.N; ++i)
        if (std::abs(g.x(i)) > 1.0 && std::abs(u[i]) < 0.25)
            throw Error(Errc::VacuumViolation, "|u| < 1/4 at x = " + std::to_string(g.x(i)));
}

// The cut-off term is an exact derivative and (1 - chi) vanishes at |x| = 1,
// so its integral over each half line is the pinned end phase.
double modified_from(const CVec& u, const CVec& du, const Grid1D& g) {
    require_off_vacuum(u, g);
    RVec ph = unwrapped_phase(u, g);
    RVec f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = pair(cplx(0.0, 1.0) * u[i], du[i]);
    return 0.5 * (integrate(f, g) - ph.back() + ph.front());
}

}  // namespace

double modified_momentum(const CVec& u, const Grid1D& g) {
    return modified_from(u, differentiate(u, g, 1), g);
}

double modified_momentum_cutoff(const CVec& u, const Grid1D& g) {
    require_off_vacuum(u, g);
    CVec du = differentiate(u, g, 1);
    RVec ph = unwrapped_phase(u, g);
    RVec f(u.size());
    for (int i = 0; i < g.N; ++i) {
        double x = g.x(i);
        double j = pair(cplx(0.0, 1.0) * u[i], du[i]);
        if (std::abs(x) <= 1.0) {
            f[i] = j;
        } else {
            // phase' = <iu,u'>/|u|^2
            f[i] = j * (1.0 - (1.0 - cutoff(x)) / std::norm(u[i])) + cutoff_derivative(x) * ph[i];
        }
    }
    return 0.5 * integrate(f, g);
}

double mod_pi_distance(double a, double b) {
    double d = a - b;
    return std::abs(d - kPi * std::round(d / kPi));
}

ConservedSet conserved(const CVec& u, const Grid1D& g, bool with_modified) {
    check_field(u, g);
    CVec du = differentiate(u, g, 1);
    const std::size_t n = u.size();
    RVec fm(n), fp(n), f1(n), f2(n);
    for_nodes(n, [&](std::size_t i) {
        double r = std::norm(u[i]), w = 1.0 - r, d = std::norm(du[i]);
        fm[i] = w;
        fp[i] = (u[i] * std::conj(du[i])).imag();
        f1[i] = d - (1.0 - r * r * r) / 3.0;
        f2[i] = d + w * w * (2.0 + r) / 3.0;
    });
    ConservedSet s;
    s.mass = integrate(fm, g);
    s.p_classical = integrate(fp, g);
    s.E1 = integrate(f1, g);
    s.E2 = integrate(f2, g);
    if (with_modified) {
        try {
            s.p_modified = modified_from(u, du, g);
        } catch (const Error& e) {
            if (e.code() != Errc::VacuumViolation && e.code() != Errc::UnwrapAmbiguity) throw;
        }
    }
    return s;
}

double weighted_norm(const CVec& f, const Grid1D& g, const RVec& eta) {
    CVec df = differentiate(f, g, 1);
    RVec h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) h[i] = std::norm(df[i]) + eta[i] * std::norm(f[i]);
    return std::sqrt(std::max(0.0, integrate(h, g)));
}

double weighted_norm(const CVec& f, const Grid1D& g, const DarkParams& p) {
    return weighted_norm(f, g, eta_weight(g, p));
}

double distance_dc(const CVec& u1, const CVec& u2, const Grid1D& g, const DarkParams& p) {
    auto pf = profile_fields(g, p);
    CVec d(u1.size());
    RVec h(u1.size());
    for (std::size_t i = 0; i < u1.size(); ++i) {
        d[i] = u1[i] - u2[i];
        double a = std::norm(pf.phi[i]);
        double m = std::norm(u1[i]) - std::norm(u2[i]);
        h[i] = a * a * a * m * m;
    }
    double n2 = weighted_norm(d, g, pf.eta);
    return std::sqrt(n2 * n2 + integrate(h, g));
}

double quadratic_form(const CVec& z, const Grid1D& g, const DarkParams& p) {
    RVec eta = eta_weight(g, p);
    CVec dz = differentiate(z, g, 1);
    RVec h(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) h[i] = std::norm(dz[i]) - eta[i] * std::norm(z[i]);
    return 0.5 * integrate(h, g);
}

double nonlinear_remainder(const CVec& z, const Grid1D& g, const DarkParams& p) {
    CVec phi = dark_profile(g, p);
    RVec h(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        double a = std::norm(phi[i]);
        double rho = std::norm(phi[i] + z[i]) - a;
        h[i] = a * rho * rho + rho * rho * rho / 3.0;
    }
    return integrate(h, g);
}

double expansion_linear_term(const CVec& z, const Grid1D& g, const DarkParams& p) {
    CVec dphi = dark_derivative(g, p);
    RVec h(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        h[i] = 2.0 * (cplx(0.0, 1.0) * dphi[i] * std::conj(z[i])).real();
    return -p.c * integrate(h, g);
}

CVec kink(const Grid1D& g, double beta) {
    return sample_complex(g, [beta](double x) { return cplx(phi0(beta * x), 0.0); });
}

bool energy_floor_probe(const std::vector<CVec>& candidates, const Grid1D& g) {
    const double floor = E2(to_complex(black_profile(g).first), g);
    for (const auto& u : candidates) {
        double mn = 1e300;
        for (auto v : u) mn = std::min(mn, std::abs(v));
        if (mn > 1e-3) throw Error(Errc::DomainError, "candidate does not vanish on the grid");
        double e = E2(u, g);
        if (!std::isfinite(e)) throw Error(Errc::NonFiniteField, "candidate energy not finite");
        if (e < floor - 1e-6) return false;
    }
    return true;
}

}  // namespace gpq

namespace gpq {

SmallSpeedNorms small_speed_norms(const Grid1D& g, const DarkParams& p) {
    const std::size_t n = g.size();
    RVec fa(n), fb(n), r(n);
    for_nodes(n, [&](std::size_t i) {
        const double x = g.x(static_cast<int>(i));
        ProfilePoint pc = eval_profile(p, x);
        const double w0 = omega0(x), e0 = eta0(x);
        const double dmod = w0 - pc.omega;  // |phi_c|^2 - phi0^2
        fa[i] = dmod * dmod / e0;
        const double d = phi0(x) * e0 - pc.phi.real() * pc.eta;
        fb[i] = d * d / e0;
        r[i] = std::abs(dmod / ((1.0 + x * x) * pc.eta));
    });
    SmallSpeedNorms s;
    s.mod_L2 = std::sqrt(integrate(fa, g));
    s.reta_L2 = std::sqrt(integrate(fb, g));
    std::size_t k = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (r[i] > r[k]) k = i;
    s.a00_sup = r[k];
    s.a00_argmax = g.x(static_cast<int>(k));
    return s;
}

}  // namespace gpq
