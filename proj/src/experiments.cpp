#include "gpq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gpq/errors.hpp"
#include "gpq/io.hpp"
#include "gpq/spectral.hpp"

namespace gpq {

using json = nlohmann::ordered_json;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

json prov(double v, const char* source) { return json{{"value", v}, {"source", source}}; }

void write_text(const std::filesystem::path& p, const std::string& s) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(Errc::ConfigError, "output.dir: cannot write " + p.string());
    f << s;
}

std::string join_row(std::initializer_list<double> v) {
    std::string out;
    for (double x : v) {
        if (!out.empty()) out += ',';
        out += fmt17(x);
    }
    return out;
}

double reduce_pi(double d) { return d - kPi * std::round(d / kPi); }

// least squares for y = sum_k coef_k s^(p0 + k), three terms
Vec3 lsq3(const RVec& s, const RVec& y, int p0) {
    Mat3 A{};
    Vec3 b{};
    for (std::size_t i = 0; i < s.size(); ++i) {
        double ph[3] = {std::pow(s[i], p0), std::pow(s[i], p0 + 1), std::pow(s[i], p0 + 2)};
        for (int r = 0; r < 3; ++r) {
            b[r] += ph[r] * y[i];
            for (int c = 0; c < 3; ++c) A[r][c] += ph[r] * ph[c];
        }
    }
    return solve3(A, b);
}

double quad_grad(const Grid1D& g, const DarkParams& p) {
    CVec d = dark_derivative(g, p);
    RVec h(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) h[i] = std::norm(d[i]);
    return integrate(h, g);
}

double quad_dphi_eta(const Grid1D& g, const DarkParams& p) {
    CVec d = dark_derivative(g, p);
    RVec eta = eta_weight(g, p), h(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) h[i] = std::norm(d[i]) / eta[i];
    return integrate(h, g);
}

// P[phi_c] under the pinned phase conventions
double momentum_form(const DarkParams& p) {
    return kPi / 2.0 - std::atan(p.m1() / p.m2()) - 0.5 * p.m1() * p.m2() * atan_ratio(p.mu);
}

struct Suite {
    std::optional<double> override_tol;
    std::vector<CheckRow> rows;

    double t(double tol) const { return override_tol ? *override_tol : tol; }
    void push(const std::string& n, double v, double r, double tol, bool ok, const char* src) {
        rows.push_back({n, v, r, tol, ok ? "PASS" : "FAIL", src});
    }
    void abs(const std::string& n, double v, double r, double tol, const char* src) {
        tol = t(tol);
        push(n, v, r, tol, std::abs(v - r) <= tol, src);
    }
    void rel(const std::string& n, double v, double r, double tol, const char* src) {
        tol = t(tol);
        push(n, v, r, tol, std::abs(v - r) <= tol * std::abs(r), src);
    }
    void modpi(const std::string& n, double v, double r, double tol, const char* src) {
        tol = t(tol);
        push(n, v, r, tol, mod_pi_distance(v, r) <= tol, src);
    }
    void upper(const std::string& n, double v, double bound, const char* src) {
        push(n, v, bound, 0.0, v <= bound, src);
    }
    void lower(const std::string& n, double v, double bound, const char* src) {
        push(n, v, bound, 0.0, v > bound, src);
    }
    // printed value against the measured one; disagreement is logged, not failed
    void printed(const std::string& n, double measured, double printed_value, double tol, bool mod_pi,
                 const char* src) {
        double d = mod_pi ? mod_pi_distance(measured, printed_value) : std::abs(measured - printed_value);
        rows.push_back({n, measured, printed_value, tol, d <= tol ? "PASS" : "ERRATUM", src});
    }
};

std::string c_tag(double c) {
    std::ostringstream s;
    s << c;
    return s.str();
}
}  // namespace

double energy_c2_coefficient(const Grid1D& g) {
    const double e0 = E2(to_complex(black_profile(g).first), g);
    RVec s, y;
    for (int j = 0; j < 10; ++j) {
        double c = -0.02 - 0.18 * j / 9.0;
        s.push_back(c / 0.2);
        y.push_back(E2(dark_profile(g, resolved_params(c, Side::minus)), g) - e0);
    }
    return lsq3(s, y, 2)[0] / (0.2 * 0.2);
}

double momentum_slope(const Grid1D& g) {
    const double p0 = modified_momentum(to_complex(black_profile(g).first), g);
    RVec s, y;
    for (int j = 0; j < 10; ++j) {
        double c = -0.01 - 0.09 * j / 9.0;
        s.push_back(c / 0.1);
        y.push_back(reduce_pi(modified_momentum(dark_profile(g, resolved_params(c, Side::minus)), g) - p0));
    }
    return lsq3(s, y, 1)[0] / 0.1;
}

std::vector<CheckRow> verify_suite(const RunConfig& cfg) {
    Suite S;
    S.override_tol = cfg.verify_tol;
    const Grid1D g = cfg.grid();
    const Grid1D gf = make_grid(cfg.L, 2 * cfg.N - 1);
    const double e2b = E2_black();
    const DarkParams black = black_params();

    // black soliton identities
    auto [phi0f, dphi0f] = black_profile(g);
    const CVec phi0c = to_complex(phi0f);
    RVec eta0f = eta_black(g);
    ConservedSet cb = conserved(phi0c, g);
    S.rel("black.E2", cb.E2, e2b, 1e-8, "quadrature");
    S.abs("black.mass", cb.mass, mass_black(), 1e-8, "quadrature");
    S.abs("black.int_eta0", integrate(eta0f, g), 3.0, 1e-8, "quadrature");
    {
        RVec h(eta0f.size()), d2(eta0f.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
            h[i] = eta0f[i] * eta0f[i];
            d2[i] = dphi0f[i] * dphi0f[i];
        }
        S.abs("black.eta0_L2sq", integrate(h, g), e2b, 1e-8, "quadrature");
        double h0 = weighted_norm(phi0c, g, black);
        S.abs("black.H0_normsq_vs_2grad", h0 * h0, 2.0 * integrate(d2, g), 1e-8, "quadrature");
        S.abs("black.H0_normsq_vs_E2", h0 * h0, e2b, 1e-8, "quadrature");
    }
    S.abs("black.E2_minus_E1_minus_mass", cb.E2 - cb.E1 - cb.mass, 0.0, 1e-10, "quadrature");
    S.printed("black.E2_minus_E1_printed_4/3_mass", cb.E2 - cb.E1, 4.0 / 3.0 * cb.mass, 1e-10, false, "quadrature");
    S.abs("black.p_classical", cb.p_classical, 0.0, 1e-12, "quadrature");
    S.modpi("black.p_modified_pinned", cb.p_modified.value_or(NAN), kPi / 2.0, 1e-10, "quadrature");
    S.printed("black.p_modified_printed_zero", cb.p_modified.value_or(NAN), 0.0, 1e-10, true, "quadrature");
    S.abs("black.Q0_phi0", quadratic_form(phi0c, g, black), 0.0, 1e-8, "quadrature");
    S.abs("black.Q0_one", quadratic_form(CVec(g.size(), 1.0), g, black), -1.5, 1e-8, "quadrature");

    // residuals
    Residuals rb = residuals(g, black);
    S.upper("residual.black.stationary", rb.sup_stationary, cfg.verify_tol.value_or(1e-10), "closed_form");
    S.upper("residual.black.traveling", rb.sup_traveling, cfg.verify_tol.value_or(1e-10), "closed_form");
    S.upper("residual.black.first_order", rb.sup_first_order, cfg.verify_tol.value_or(1e-10), "closed_form");
    for (double c : {-0.1, -0.5, -1.0, 0.5}) {
        DarkParams p = sign_branch_search(dark_params(c, default_side(c)), g);
        S.upper("residual.dark.c=" + c_tag(c), traveling_residual_fd(g, p), cfg.verify_tol.value_or(1e-6),
                "measured");
    }

    // dark closed forms against quadrature on the refined grid
    for (double c : {-0.1, -0.5, -1.0}) {
        const DarkParams p = resolved_params(c, Side::minus);
        const ClosedFormCatalog cf = closed_forms(p);
        const std::string tag = ".c=" + c_tag(c);
        CVec phf = dark_profile(gf, p);
        ConservedSet cd = conserved(phf, gf);
        S.rel("dark.E2" + tag, cd.E2, cf.E2_dark, 1e-6, "quadrature");
        S.rel("dark.grad_L2" + tag, quad_grad(gf, p), cf.grad_L2, 1e-6, "quadrature");
        S.rel("dark.dphi_over_sqrt_eta_L2sq" + tag, quad_dphi_eta(gf, p), cf.dphi_over_sqrt_etac_L2sq, 1e-6,
              "quadrature");
        S.abs("dark.E2_minus_E1_minus_mass" + tag, cd.E2 - cd.E1 - cd.mass, 0.0, 1e-10, "quadrature");
        const double pq = cd.p_modified.value_or(NAN);
        S.modpi("dark.P_pinned_form" + tag, pq, momentum_form(p), 1e-6, "quadrature");
        S.printed("dark.P_printed" + tag, pq, cf.P_dark, 1e-6, true, "quadrature");

        CVec ph = dark_profile(g, p), dph = dark_derivative(g, p);
        double im_max = 0.0, mod_max = 0.0, r0_max = 0.0;
        for (int i = 0; i < g.N; ++i) {
            im_max = std::max(im_max, std::abs(ph[i].imag()));
            mod_max = std::max(mod_max, std::abs(ph[i]));
            r0_max = std::max(r0_max, std::norm(dph[i]) / eta0(g.x(i)));
        }
        S.abs("dark.sup_Im" + tag, im_max, cf.sup_Ic, 1e-8, "closed_form");
        // |phi_c| rounds to 1 far out, so test 1 - |phi_c|^2 in its cancellation-free form
        RVec om = omega_weight(g, p);
        S.lower("dark.min_one_minus_modulus_sq" + tag, *std::min_element(om.begin(), om.end()), 0.0, "closed_form");
        S.upper("dark.sup_modulus" + tag, mod_max, 1.0, "measured");
        S.rel("dark.sup_dphi_sq_over_eta0" + tag, r0_max, cf.sup_dphi_over_sqrt_eta0_sq, 1e-6, "closed_form");
    }

    // energy split, with z a smooth localized perturbation
    {
        CVec z = sample_complex(g, [](double x) { return cplx(0.03, 0.02) / std::cosh(x - 0.3); });
        CVec u(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) u[i] = phi0c[i] + z[i];
        double dE = E2(u, g) - cb.E2, q = quadratic_form(z, g, black), nl = nonlinear_remainder(z, g, black);
        S.abs("split.black.2Q_plus_N", 2.0 * q + nl, dE, 1e-9, "quadrature");
        S.printed("split.black.printed_Q_plus_N", q + nl, dE, 1e-9, false, "quadrature");
        const DarkParams p = resolved_params(-0.3, Side::minus);
        CVec ph = dark_profile(g, p);
        for (std::size_t i = 0; i < z.size(); ++i) u[i] = ph[i] + z[i];
        double dEc = E2(u, g) - E2(ph, g);
        double lin = expansion_linear_term(z, g, p), qc = quadratic_form(z, g, p), nc = nonlinear_remainder(z, g, p);
        S.abs("split.dark.c=-0.3.lin_2Q_plus_N", lin + 2.0 * qc + nc, dEc, 1e-9, "quadrature");
        S.printed("split.dark.c=-0.3.printed_lin_Q_plus_N", lin + qc + nc, dEc, 1e-9, false, "quadrature");
    }

    // small-speed expansions
    const double c2_ref = -0.25 * (3.0 + e2b);
    S.abs("expansion.E2_c2_coefficient", energy_c2_coefficient(g), c2_ref, 1e-3, "fit");
    const double slope = momentum_slope(g);
    S.abs("expansion.P_slope_vs_hamilton", slope, c2_ref, 1e-3, "fit");
    S.printed("expansion.P_slope_printed", slope, -(0.75 + std::sqrt(3.0) * kPi / 6.0), 1e-3, false, "fit");

    // spectrum
    {
        Pencil P = assemble_pencil(g);
        SpectralResult r = solve_lowest(P, 3);
        S.upper("spectrum.sigma0", std::abs(r.sigma[0]), cfg.verify_tol.value_or(1e-8), "eigensolve");
        S.abs("spectrum.sigma1", r.sigma[1], 1.0, 1e-4, "eigensolve");
        S.lower("spectrum.sigma2_above_1", r.sigma[2], 1.0, "eigensolve");
        if (cfg.L == 30.0 && cfg.N == 4097)
            S.abs("spectrum.lambda2_regression", r.lambda[2], kLambda2Grid, 1e-9, "regression");
        for (int k = 0; k < 3; ++k)
            S.abs("spectrum.sign_changes.e" + std::to_string(k), sign_changes(r.fields[k]), k, 0.0, "eigensolve");
    }

    // modulation
    {
        const DarkParams p = resolved_params(-0.05, Side::minus);
        CVec w = sample_complex(g, [&](double x) { return std::exp(I * 0.1) * eval_profile(p, x - 0.2).phi; });
        ModulationState s = fit(w, g, {-0.04, 0.15, 0.05}, cfg.fit_options());
        double err = std::max({std::abs(s.c + 0.05), std::abs(s.a - 0.2), std::abs(s.theta - 0.1)});
        S.upper("modulation.round_trip", err, cfg.verify_tol.value_or(1e-8), "fit");

        OriginOracle o = jacobian_origin_oracle(g, Side::minus);
        Mat3 J = fd_jacobian(phi0c, g, 0.0, 0.0, 0.0, Side::minus);
        double jd = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) jd = std::max(jd, std::abs(J[i][j] - o.M.M[i][j]));
        S.upper("modulation.fd_jacobian_vs_oracle", jd, cfg.verify_tol.value_or(1e-5), "measured");
        S.abs("modulation.BB", o.BB, 0.5 * e2b, 1e-5, "quadrature");
        S.abs("modulation.AA", o.AA, c2_ref, 1e-5, "quadrature");
        S.abs("modulation.EE_abs", std::abs(o.EE), 2.0 / 3.0, 1e-5, "quadrature");
        S.abs("modulation.CC", o.CC, 0.0, 1e-10, "quadrature");
        S.abs("modulation.DD", o.DD, 0.0, 1e-10, "quadrature");
        S.rel("modulation.det", o.det, 0.25 * e2b * (1.0 + e2b / 3.0), 1e-5, "quadrature");
        S.printed("modulation.diag_a_printed", J[0][0], 1.14052, 1e-5, false, "measured");
        S.printed("modulation.diag_c_printed", J[1][1], 1.32026, 1e-5, false, "measured");
        S.printed("modulation.diag_theta_printed", J[2][2], 0.66667, 1e-5, false, "measured");

        Rates rt = rates(-0.3, CVec(g.size()), g, Side::minus);
        double re = std::max({std::abs(rt.da + 0.3), std::abs(rt.dc), std::abs(rt.dtheta)});
        S.upper("modulation.rates_c=-0.3", re, cfg.verify_tol.value_or(1e-6), "measured");
    }

    // integral identity
    for (auto [b, y] : {std::pair{1.0, 0.5}, {2.0, 1.0}, {0.5, 0.3}, {3.0, 1.5}, {1.5, -0.9}}) {
        LemmaValues v = lemma_quadrature_identity(b, y);
        S.abs("lemma.b=" + c_tag(b) + ".y=" + c_tag(y), v.lhs, v.rhs, 1e-10, "quadrature");
    }

    // small-speed inequalities
    for (double c : {-0.05, -0.1, -0.2}) {
        SmallSpeedNorms n = small_speed_norms(g, resolved_params(c, Side::minus));
        const std::string tag = ".c=" + c_tag(c);
        const double c2 = c * c;
        S.upper("smallc.mod_L2_over_c2" + tag, n.mod_L2 / c2, 0.5, "regression");
        S.upper("smallc.reta_L2_over_c2" + tag, n.reta_L2 / c2, 0.5, "regression");
        S.upper("smallc.a00_sup_bound" + tag, n.a00_sup, 0.375 * c2 * (1.0 + cfg.verify_tol.value_or(0.05)),
                "measured");
        S.abs("smallc.a00_argmax" + tag, n.a00_argmax, 0.0, 0.5 * g.h, "measured");
        S.rel("smallc.a00_max_vs_3c2/8" + tag, n.a00_sup, 0.375 * c2, 0.05, "measured");
    }
    return S.rows;
}

std::array<Bump, 3> seed_bumps(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // raw 53-bit uniforms; std distributions are not portable across libraries
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1p-53; };
    std::array<Bump, 3> b{};
    for (auto& x : b) {
        x.center = uni(-5.0, 5.0);
        x.width = uni(0.5, 2.0);
        double re = uni(-1.0, 1.0), im = uni(-1.0, 1.0);
        x.amp = {re, im};
    }
    return b;
}

CVec bump_field(const Grid1D& g, const std::array<Bump, 3>& b) {
    return sample_complex(g, [&](double x) {
        cplx s = 0.0;
        for (const auto& k : b) {
            double r = (x - k.center) / k.width;
            s += k.amp * std::exp(-r * r);
        }
        return s;
    });
}

CVec perturbed_black(const Grid1D& g, double eps, std::uint64_t seed, double a0, double theta0) {
    const CVec base = sample_complex(g, [&](double x) { return std::exp(I * theta0) * phi0(x - a0); });
    if (eps == 0.0) return base;
    const CVec bump = bump_field(g, seed_bumps(seed));
    const DarkParams black = black_params();
    auto make = [&](double s) {
        CVec u(base.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = base[i] + s * bump[i];
        return u;
    };
    auto d = [&](double s) { return distance_dc(make(s), base, g, black); };
    double lo = 0.0, hi = eps;
    while (d(hi) < eps) {
        hi *= 2.0;
        if (hi > 1e6) throw Error(Errc::DomainError, "ic.eps: cannot reach the requested distance");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (d(mid) < eps ? lo : hi) = mid;
    }
    return make(0.5 * (lo + hi));
}

InitialData initial_data(const RunConfig& cfg) {
    const Grid1D g = cfg.grid();
    InitialData id;
    const double a0 = cfg.a0, th0 = cfg.theta0, L = cfg.L;
    const cplx rot = std::exp(I * th0);
    if (cfg.ic_kind == "black") {
        id.u = sample_complex(g, [&](double x) { return rot * phi0(x - a0); });
        id.exact = [=](double) { return std::make_pair(rot * phi0(-L - a0), rot * phi0(L - a0)); };
        id.guess = {0.0, a0, th0};
    } else if (cfg.ic_kind == "dark") {
        const DarkParams p = resolved_params(cfg.c, cfg.resolved_side());
        const double c = cfg.c;
        id.u = sample_complex(g, [&](double x) { return rot * eval_profile(p, x - a0).phi; });
        id.exact = [=](double t) {
            return std::make_pair(rot * eval_profile(p, -L - a0 - c * t).phi, rot * eval_profile(p, L - a0 - c * t).phi);
        };
        id.guess = {c, a0, th0};
    } else if (cfg.ic_kind == "uniform") {
        const double r = cfg.u0;
        id.u.assign(g.size(), cplx(r) * rot);
        id.exact = [=](double t) { return std::make_pair(rot * uniform_exact(r, t), rot * uniform_exact(r, t)); };
    } else {
        id.u = perturbed_black(g, cfg.eps, cfg.seed, a0, th0);
        id.guess = {0.0, a0, th0};
    }
    return id;
}

StabilityRun run_stability(const RunConfig& cfg) {
    if (cfg.ic_kind != "perturbed_black") throw Error(Errc::ConfigError, "ic.kind: stability needs perturbed_black");
    const Grid1D g = cfg.grid();
    InitialData id = initial_data(cfg);
    SchemeConfig sc = cfg.scheme();
    EvolveOptions opt;
    opt.fit_every = 10;
    opt.guess = id.guess;
    opt.fit = cfg.fit_options();

    StabilityReport rep;
    opt.on_fit = [&](double, const CVec& u, const ModulationState& s) {
        CVec z = modulation_z(u, g, s.c, s.a, s.theta, opt.fit.side);
        Rates r = rates(s.c, z, g, opt.fit.side);
        rep.max_abs_da = std::max(rep.max_abs_da, std::abs(r.da));
        rep.max_abs_dtheta = std::max(rep.max_abs_dtheta, std::abs(r.dtheta));
        rep.max_rate_sum = std::max(rep.max_rate_sum, std::abs(r.da) + std::abs(r.dtheta));
        rep.max_abs_c = std::max(rep.max_abs_c, std::abs(s.c));
    };
    Trajectory tr = evolve(id.u, g, cfg.T, sc, opt, id.exact);

    std::string csv = std::string(kStabilityHeader) + "\n";
    bool first = true;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        if (!tr.modulation[k]) continue;
        const ModulationState& m = *tr.modulation[k];
        const ConservedSet& cs = tr.conserved[k];
        csv += join_row({tr.times[k], m.c, m.a, m.theta, cs.mass, cs.p_classical, cs.p_modified.value_or(NAN), cs.E1,
                         cs.E2, tr.z_H0[k], tr.d0[k]});
        csv += '\n';
        if (first) rep.d0_initial = tr.d0[k];
        first = false;
        rep.d0_max = std::max(rep.d0_max, tr.d0[k]);
    }
    rep.ratio = rep.d0_initial > 0.0 ? rep.d0_max / rep.d0_initial : 1.0;
    if (cfg.eps > 0.0)
        rep.pass = rep.ratio <= 10.0 && rep.max_abs_c <= 10.0 * cfg.eps;
    else
        rep.pass = rep.d0_max <= 1e-6;

    json j;
    j["command"] = "stability";
    j["eps"] = cfg.eps;
    j["seed"] = cfg.seed;
    j["T"] = cfg.T;
    j["dt"] = cfg.dt;
    j["grid"] = {{"L", cfg.L}, {"N", cfg.N}};
    j["d0_initial"] = prov(rep.d0_initial, "measured");
    j["d0_max"] = prov(rep.d0_max, "measured");
    j["ratio"] = prov(rep.ratio, "measured");
    j["max_abs_c"] = prov(rep.max_abs_c, "fit");
    j["max_abs_da"] = prov(rep.max_abs_da, "measured");
    j["max_abs_dtheta"] = prov(rep.max_abs_dtheta, "measured");
    j["max_rate_sum"] = prov(rep.max_rate_sum, "measured");
    j["K_rate_over_eps"] = prov(cfg.eps > 0.0 ? rep.max_rate_sum / cfg.eps : 0.0, "measured");
    j["pass"] = rep.pass;
    return {rep, csv, j.dump(2) + "\n"};
}

namespace {
std::filesystem::path out(const RunConfig& cfg, const char* name) { return std::filesystem::path(cfg.out_dir) / name; }

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }
}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    std::vector<CheckRow> rows = verify_suite(cfg);
    int failed = 0, errata = 0;
    json all = json::array(), err = json::array();
    for (const auto& r : rows) {
        log << pad(r.status, 8) << pad(r.name, 44) << " value=" << fmt17(r.value) << " ref=" << fmt17(r.reference)
            << " tol=" << fmt17(r.tol) << " [" << r.source << "]\n";
        json e = {{"name", r.name}, {"status", r.status}, {"value", prov(r.value, r.source.c_str())},
                  {"reference", r.reference}, {"tol", r.tol}};
        all.push_back(e);
        if (r.status == "FAIL") ++failed;
        if (r.status == "ERRATUM") {
            ++errata;
            err.push_back({{"name", r.name}, {"printed", r.reference}, {"measured", r.value}, {"source", r.source},
                           {"authoritative", "measured"}});
        }
    }
    log << rows.size() << " checks, " << failed << " failed, " << errata << " errata logged\n";
    write_text(out(cfg, "verify.json"), json{{"command", "verify"}, {"checks", all}}.dump(2) + "\n");
    write_text(out(cfg, "errata.json"), err.dump(2) + "\n");
    if (failed) {
        for (const auto& r : rows)
            if (r.status == "FAIL") log << "failed check: " << r.name << "\n";
    }
    return failed ? 1 : 0;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
    const Grid1D g = cfg.grid();
    const int k = cfg.spectrum_k;
    Pencil P = assemble_pencil(g);
    SpectralResult r = solve_lowest(P, k);
    std::optional<SpectralResult> coarse;
    if ((cfg.N - 1) % 2 == 0 && (cfg.N + 1) / 2 >= 9) coarse = solve_lowest(assemble_pencil(make_grid(cfg.L, (cfg.N + 1) / 2)), k);

    std::string csv = "k,sigma,lambda,sigma_extrapolated,lambda_extrapolated,sign_changes\n";
    json modes = json::array();
    for (int j = 0; j < k; ++j) {
        double sx = coarse ? richardson2(coarse->sigma[j], r.sigma[j]) : NAN;
        int sc = sign_changes(r.fields[j]);
        csv += std::to_string(j) + "," + join_row({r.sigma[j], r.lambda[j], sx, sigma_to_lambda(sx)}) + "," +
               std::to_string(sc) + "\n";
        modes.push_back({{"k", j},
                         {"sigma", prov(r.sigma[j], "eigensolve")},
                         {"lambda", prov(r.lambda[j], "eigensolve")},
                         {"sigma_extrapolated", prov(sx, "fit")},
                         {"lambda_extrapolated", prov(sigma_to_lambda(sx), "fit")},
                         {"sign_changes", sc}});
        log << "k=" << j << " sigma=" << fmt17(r.sigma[j]) << " lambda=" << fmt17(r.lambda[j]) << " sign_changes=" << sc
            << "\n";
    }
    std::string fields = "x";
    for (int j = 0; j < k; ++j) fields += ",e" + std::to_string(j);
    fields += "\n";
    for (int i = 0; i < g.N; ++i) {
        fields += fmt17(g.x(i));
        for (int j = 0; j < k; ++j) fields += "," + fmt17(r.fields[j][i]);
        fields += "\n";
    }
    json j = {{"command", "spectrum"}, {"grid", {{"L", cfg.L}, {"N", cfg.N}}}, {"modes", modes}};
    write_text(out(cfg, "spectrum.csv"), csv);
    write_text(out(cfg, "eigenfields.csv"), fields);
    write_text(out(cfg, "spectrum.json"), j.dump(2) + "\n");
    return 0;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& log) {
    const Grid1D g = cfg.grid();
    InitialData id = initial_data(cfg);
    SchemeConfig sc = cfg.scheme();
    EvolveOptions opt;
    const bool soliton = cfg.ic_kind != "uniform";
    opt.fit_every = soliton ? 10 : 0;
    opt.guess = id.guess;
    opt.fit = cfg.fit_options();

    const int mid = g.N / 2;
    RVec phase;
    double prev = 0.0;
    RVec zt, zx;
    opt.on_step = [&](double t, const CVec& u) {
        double a = std::arg(u[mid]);
        if (!phase.empty()) a = prev + std::remainder(a - prev, 2.0 * kPi);
        prev = a;
        phase.push_back(a);
        if (soliton && phase.size() % 100 == 1) {
            zt.push_back(t);
            zx.push_back(track_zero(u, g, zx.empty() ? cfg.a0 : zx.back()));
        }
    };
    Trajectory tr = evolve(id.u, g, cfg.T, sc, opt, id.exact);

    std::string csv = "t,mass,p_classical,p_modified,E1,E2,phase,c,a,theta\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const ConservedSet& cs = tr.conserved[k];
        const auto& m = tr.modulation[k];
        csv += join_row({tr.times[k], cs.mass, cs.p_classical, cs.p_modified.value_or(NAN), cs.E1, cs.E2, phase[k],
                         m ? m->c : NAN, m ? m->a : NAN, m ? m->theta : NAN});
        csv += '\n';
    }
    const ConservedSet& c0 = tr.conserved.front();
    const ConservedSet& c1 = tr.conserved.back();
    auto drift = [](double a, double b) { return a != 0.0 ? std::abs(b - a) / std::abs(a) : std::abs(b - a); };
    json j = {{"command", "evolve"},
              {"ic_kind", cfg.ic_kind},
              {"bc", bc_name(sc.bc)},
              {"T", cfg.T},
              {"dt", cfg.dt},
              {"grid", {{"L", cfg.L}, {"N", cfg.N}}},
              {"E2_initial", prov(c0.E2, "quadrature")},
              {"E2_final", prov(c1.E2, "quadrature")},
              {"E2_rel_drift", prov(drift(c0.E2, c1.E2), "measured")},
              {"mass_initial", prov(c0.mass, "quadrature")},
              {"mass_final", prov(c1.mass, "quadrature")},
              {"mass_rel_drift", prov(drift(c0.mass, c1.mass), "measured")}};
    double pmax = 0.0;
    std::optional<double> p0;
    for (const auto& cs : tr.conserved)
        if (cs.p_modified) {
            if (!p0) p0 = cs.p_modified;
            pmax = std::max(pmax, mod_pi_distance(*cs.p_modified, *p0));
        }
    j["p_modified_drift_mod_pi"] = prov(p0 ? pmax : NAN, "measured");
    if (soliton && zt.size() >= 2) {
        // least-squares slope of the tracked zero of Re u
        double st = 0, sx = 0, stt = 0, stx = 0, n = static_cast<double>(zt.size());
        for (std::size_t i = 0; i < zt.size(); ++i) {
            st += zt[i];
            sx += zx[i];
            stt += zt[i] * zt[i];
            stx += zt[i] * zx[i];
        }
        j["zero_crossing_speed"] = prov((n * stx - st * sx) / (n * stt - st * st), "fit");
    }
    if (!soliton) {
        double st = 0, sp = 0, stt = 0, stp = 0, n = static_cast<double>(phase.size());
        for (std::size_t i = 0; i < phase.size(); ++i) {
            st += tr.times[i];
            sp += phase[i];
            stt += tr.times[i] * tr.times[i];
            stp += tr.times[i] * phase[i];
        }
        j["phase_rate"] = prov((n * stp - st * sp) / (n * stt - st * st), "fit");
        j["phase_rate_exact"] = prov(1.0 - std::pow(cfg.u0, 4), "closed_form");
    }
    write_text(out(cfg, "evolve.csv"), csv);
    {
        std::ostringstream s;
        write_snapshot(s, g, tr.final_u, tr.times.back());
        write_text(out(cfg, "final.snap"), s.str());
    }
    write_text(out(cfg, "evolve.json"), j.dump(2) + "\n");
    log << "evolved " << tr.times.size() - 1 << " steps to t=" << fmt17(tr.times.back())
        << ", E2 drift=" << fmt17(drift(c0.E2, c1.E2)) << "\n";
    return 0;
}

int cmd_modulate(const RunConfig& cfg, std::ostream& log) {
    if (cfg.snapshot.empty()) throw Error(Errc::ConfigError, "modulate.snapshot: required for modulate");
    Snapshot s = read_snapshot(cfg.snapshot);
    FitOptions fo = cfg.fit_options();
    fo.side = cfg.resolved_side();
    ModulationState guess{cfg.ic_kind == "dark" ? cfg.c : 0.0, cfg.a0, cfg.theta0};
    ModulationState m = fit(s.u, s.grid, guess, fo);
    json j = {{"command", "modulate"},
              {"snapshot", cfg.snapshot},
              {"t", s.t},
              {"c", prov(m.c, "fit")},
              {"a", prov(m.a, "fit")},
              {"theta", prov(m.theta, "fit")},
              {"residual_norm", prov(m.residual_norm, "fit")},
              {"iterations", m.iterations}};
    write_text(out(cfg, "modulate.json"), j.dump(2) + "\n");
    log << "c=" << fmt17(m.c) << " a=" << fmt17(m.a) << " theta=" << fmt17(m.theta)
        << " residual=" << fmt17(m.residual_norm) << "\n";
    return 0;
}

int cmd_stability(const RunConfig& cfg, std::ostream& log) {
    StabilityRun r = run_stability(cfg);
    write_text(out(cfg, "stability.csv"), r.csv);
    write_text(out(cfg, "stability.json"), r.json);
    const auto& p = r.report;
    log << "d0(0)=" << fmt17(p.d0_initial) << " max d0=" << fmt17(p.d0_max) << " ratio=" << fmt17(p.ratio)
        << " max|c|=" << fmt17(p.max_abs_c) << " max(|a'|+|theta'|)=" << fmt17(p.max_rate_sum)
        << (p.pass ? " PASS" : " FAIL") << "\n";
    return p.pass ? 0 : 1;
}

int cmd_profile(const RunConfig& cfg, std::ostream& log) {
    const Grid1D g = cfg.grid();
    std::string csv = "x,re,im,dre,dim,eta\n";
    if (cfg.ic_kind == "dark") {
        const DarkParams p = resolved_params(cfg.c, cfg.resolved_side());
        for (int i = 0; i < g.N; ++i) {
            ProfilePoint q = eval_profile(p, g.x(i));
            csv += join_row({g.x(i), q.phi.real(), q.phi.imag(), q.dphi.real(), q.dphi.imag(), q.eta}) + "\n";
        }
        const ClosedFormCatalog cf = closed_forms(p);
        json j = {{"command", "profile"},
                  {"c", cfg.c},
                  {"side", side_name(p.side)},
                  {"kappa", prov(p.kappa, "closed_form")},
                  {"mu1", prov(p.m1(), "closed_form")},
                  {"mu2", prov(p.m2(), "closed_form")},
                  {"mu", prov(p.mu, "closed_form")},
                  {"E2", prov(E2(dark_profile(g, p), g), "quadrature")},
                  {"E2_closed_form", prov(cf.E2_dark, "closed_form")},
                  {"P", prov(modified_momentum(dark_profile(g, p), g), "quadrature")}};
        write_text(out(cfg, "profile.json"), j.dump(2) + "\n");
    } else if (cfg.ic_kind == "black") {
        for (int i = 0; i < g.N; ++i) {
            double x = g.x(i);
            csv += join_row({x, phi0(x), 0.0, dphi0(x), 0.0, eta0(x)}) + "\n";
        }
        json j = {{"command", "profile"},
                  {"E2", prov(E2(to_complex(black_profile(g).first), g), "quadrature")},
                  {"E2_closed_form", prov(E2_black(), "closed_form")}};
        write_text(out(cfg, "profile.json"), j.dump(2) + "\n");
    } else {
        throw Error(Errc::ConfigError, "ic.kind: profile needs black or dark");
    }
    write_text(out(cfg, "profile.csv"), csv);
    log << "wrote " << out(cfg, "profile.csv").string() << "\n";
    return 0;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
    try {
        if (name == "verify") return cmd_verify(cfg, log);
        if (name == "spectrum") return cmd_spectrum(cfg, log);
        if (name == "evolve") return cmd_evolve(cfg, log);
        if (name == "modulate") return cmd_modulate(cfg, log);
        if (name == "stability") return cmd_stability(cfg, log);
        if (name == "profile") return cmd_profile(cfg, log);
        log << "unknown command '" << name << "'\n";
        return 2;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return is_config_error(e.code()) ? 2 : 3;
    } catch (const std::filesystem::filesystem_error& e) {
        log << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace gpq
