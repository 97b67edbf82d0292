// Acceptance battery: one PASS/FAIL line per criterion, tolerances as stated.
// Exit status is the number of failed criteria.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "gpq/config.hpp"
#include "gpq/experiments.hpp"
#include "gpq/io.hpp"
#include "gpq/spectral.hpp"

using namespace gpq;
using json = nlohmann::json;

namespace {

int failures = 0;

void report(int k, bool ok, const std::string& detail) {
    std::printf("CRITERION %2d %s  %s\n", k, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

void note(const std::string& s) {
    std::printf("             %s\n", s.c_str());
    std::fflush(stdout);
}

std::string num(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const CheckRow* find(const std::vector<CheckRow>& rows, const std::string& name) {
    for (const auto& r : rows)
        if (r.name == name) return &r;
    return nullptr;
}

std::string c_tag(double c) {
    std::ostringstream s;
    s << c;
    return s.str();
}

json read_json(const std::filesystem::path& p) {
    std::ifstream f(p);
    return json::parse(f);
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("gpq_acceptance_" + name);
    std::filesystem::remove_all(p);
    return p;
}

// 1. closed-form identities for the black soliton, through the verify suite
void criterion1(const std::vector<CheckRow>& rows, double verify_seconds) {
    const Grid1D g = RunConfig{}.grid();
    auto [p0, d0] = black_profile(g);
    const CVec u = to_complex(p0);
    const double e2 = E2(u, g), e2ref = E2_black();
    const RVec eta = eta_black(g);
    RVec sq(eta.size()), grad(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
        sq[i] = eta[i] * eta[i];
        grad[i] = d0[i] * d0[i];
    }
    const double h0 = weighted_norm(u, g, black_params());
    const double r1 = std::abs(e2 - e2ref) / e2ref;
    const double r2 = std::abs(integrate(eta, g) - 3.0);
    const double r3 = std::abs(integrate(sq, g) - e2ref);
    const double r4 = std::abs(h0 * h0 - 2.0 * integrate(grad, g));
    int suite_fail = 0;
    for (const auto& r : rows) suite_fail += r.status == "FAIL";
    bool ok = r1 <= 1e-8 && r2 <= 1e-8 && r3 <= 1e-8 && r4 <= 1e-8 && verify_seconds < 30.0 && suite_fail == 0;
    report(1, ok,
           "E2 rel " + num(r1) + ", int eta0 " + num(r2) + ", ||eta0||^2 " + num(r3) + ", H0 vs 2grad " + num(r4) +
               " (tol 1e-8); verify " + num(verify_seconds) + " s, " + std::to_string(suite_fail) + " failed rows");
}

// 2. dark closed forms on the refined grid, or a logged erratum with quadrature authoritative
void criterion2(const std::vector<CheckRow>& rows) {
    bool ok = true;
    double worst = 0.0;
    int errata = 0;
    for (double c : {-0.1, -0.5, -1.0}) {
        const std::string t = ".c=" + c_tag(c);
        for (const char* base : {"dark.E2", "dark.grad_L2", "dark.dphi_over_sqrt_eta_L2sq"}) {
            const CheckRow* r = find(rows, base + t);
            if (!r) {
                ok = false;
                continue;
            }
            double rel = std::abs(r->value - r->reference) / std::abs(r->reference);
            worst = std::max(worst, rel);
            ok = ok && rel <= 1e-6;
        }
        const CheckRow* printed = find(rows, "dark.P_printed" + t);
        const CheckRow* pinned = find(rows, "dark.P_pinned_form" + t);
        if (!printed || !pinned) {
            ok = false;
            continue;
        }
        if (printed->status == "PASS") continue;
        // printed momentum disagrees: acceptable only as an erratum backed by quadrature
        ++errata;
        ok = ok && printed->status == "ERRATUM" && pinned->status == "PASS";
    }
    report(2, ok,
           "E2 / grad / dphi-over-sqrt-eta worst rel " + num(worst) + " (tol 1e-6, N=8193); P: " +
               std::to_string(errata) + " of 3 speeds logged as erratum, quadrature form within 1e-6 mod pi");
}

// 3. ODE residuals
void criterion3() {
    const Grid1D g = RunConfig{}.grid();
    Residuals rb = residuals(g, black_params());
    double black = std::max({rb.sup_stationary, rb.sup_traveling, rb.sup_first_order});
    double dark = 0.0;
    for (double c : {-0.1, -0.5, -1.0, 0.5}) {
        DarkParams p = sign_branch_search(dark_params(c, default_side(c)), g);
        dark = std::max(dark, traveling_residual_fd(g, p));
    }
    report(3, black <= 1e-10 && dark <= 1e-6,
           "black " + num(black) + " (tol 1e-10), dark max " + num(dark) + " (tol 1e-6)");
}

// 4. spectrum
void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    Pencil P = assemble_pencil(make_grid(30.0, 4097));
    SpectralResult r = solve_lowest(P, 3);
    double secs = seconds_since(t0);
    int s0 = sign_changes(r.fields[0]), s1 = sign_changes(r.fields[1]), s2 = sign_changes(r.fields[2]);
    bool ok = std::abs(r.sigma[0]) <= 1e-8 && std::abs(r.sigma[1] - 1.0) <= 1e-4 && r.sigma[2] > 1.0 &&
              r.lambda[2] > 0.0 && std::abs(r.lambda[2] - kLambda2Grid) <= 1e-9 && s0 == 0 && s1 == 1 && s2 == 2 &&
              secs < 60.0;
    report(4, ok,
           "sigma0 " + num(r.sigma[0]) + ", |sigma1-1| " + num(std::abs(r.sigma[1] - 1.0)) + ", sigma2 " +
               num(r.sigma[2]) + ", lambda2 " + num(r.lambda[2]) + " (pinned " + num(kLambda2Grid) +
               "), sign changes " + std::to_string(s0) + std::to_string(s1) + std::to_string(s2) + ", " +
               num(secs) + " s");
}

// 5. E2 c^2 coefficient
void criterion5() {
    const double ref = -0.25 * (3.0 + E2_black());
    const double k = energy_c2_coefficient(RunConfig{}.grid());
    report(5, std::abs(k - ref) <= 1e-3 && std::abs(ref + 1.32026) <= 1e-5,
           "fitted " + num(k) + " vs -(3+E2[phi0])/4 = " + num(ref) + " (tol 1e-3)");
}

// 6. momentum slope against the printed coefficient
void criterion6() {
    const double printed = -(0.75 + std::sqrt(3.0) * std::numbers::pi / 6.0);
    const double s = momentum_slope(RunConfig{}.grid());
    report(6, std::abs(s - printed) <= 1e-3,
           "fitted " + num(s) + " vs printed " + num(printed) + " (tol 1e-3)");
    note("measured slope equals -(3+E2[phi0])/4 = " + num(-0.25 * (3.0 + E2_black())) + " (difference " +
         num(std::abs(s + 0.25 * (3.0 + E2_black()))) + "), the value forced by dE2 = 2c dP");
}

// 7. modulation
void criterion7() {
    const Grid1D g = RunConfig{}.grid();
    const DarkParams p = resolved_params(-0.05, Side::minus);
    CVec w = sample_complex(g, [&](double x) { return std::exp(cplx(0.0, 0.1)) * eval_profile(p, x - 0.2).phi; });
    ModulationState s = fit(w, g, {-0.04, 0.15, 0.05});
    double rt = std::max({std::abs(s.c + 0.05), std::abs(s.a - 0.2), std::abs(s.theta - 0.1)});

    Mat3 J = fd_jacobian(to_complex(black_profile(g).first), g, 0.0, 0.0, 0.0, Side::minus);
    const double diag[3] = {1.14052, 1.32026, 0.66667};
    double jd = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) jd = std::max(jd, std::abs(J[i][j] - (i == j ? diag[i] : 0.0)));

    Rates r = rates(-0.3, CVec(g.size()), g);
    double re = std::max({std::abs(r.da + 0.3), std::abs(r.dc), std::abs(r.dtheta)});

    report(7, rt <= 1e-8 && jd <= 1e-5 && re <= 1e-6,
           "round trip " + num(rt) + " (tol 1e-8); Jacobian vs diag(1.14052, 1.32026, 0.66667) max dev " + num(jd) +
               " (tol 1e-5); rates(-0.3, 0) dev " + num(re) + " (tol 1e-6)");
    double md = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) md = std::max(md, std::abs(std::abs(J[i][j]) - (i == j ? diag[i] : 0.0)));
    note("signed diagonal " + num(J[0][0]) + ", " + num(J[1][1]) + ", " + num(J[2][2]) + "; entrywise |J| vs diag " +
         num(md) + ", det " + num(det3(J)) + " vs E2(1+E2/3)/4 = " +
         num(0.25 * E2_black() * (1.0 + E2_black() / 3.0)));
}

// 8. evolution
void criterion8() {
    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream log;

    OrderReport ord = order_check();

    RunConfig black;
    black.T = 5.0;
    black.out_dir = scratch("black").string();
    cmd_evolve(black, log);
    Snapshot s = read_snapshot((std::filesystem::path(black.out_dir) / "final.snap").string());
    double stat = sup_diff(s.u, to_complex(black_profile(s.grid).first));

    RunConfig dark;
    dark.ic_kind = "dark";
    dark.c = -0.3;
    dark.T = 10.0;
    dark.out_dir = scratch("dark").string();
    cmd_evolve(dark, log);
    json j = read_json(std::filesystem::path(dark.out_dir) / "evolve.json");
    double speed = j["zero_crossing_speed"]["value"];
    double e2d = j["E2_rel_drift"]["value"], md = j["mass_rel_drift"]["value"];
    double pd = j["p_modified_drift_mod_pi"]["value"];
    double secs = seconds_since(t0);

    bool ok = std::abs(ord.temporal - 2.0) <= 0.1 && stat <= 1e-6 && std::abs(speed + 0.3) <= 0.003 &&
              e2d <= 1e-6 && md <= 1e-6 && pd <= 1e-5 && secs < 300.0;
    report(8, ok,
           "dt order " + num(ord.temporal) + "; black sup drift " + num(stat) + " (tol 1e-6); dark speed " +
               num(speed) + " (-0.3 +- 1%); E2 drift " + num(e2d) + ", mass drift " + num(md) +
               " (tol 1e-6); P drift " + num(pd) + " (tol 1e-5); " + num(secs) + " s");
}

// 9. stability, three seeds, plus a determinism rerun
void criterion9() {
    constexpr double K = 1.0;  // pinned: |a'| + |theta'| <= K eps
    bool ok = true;
    double kmin = 1e300, kmax = 0.0;
    std::string first_csv, first_json;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        RunConfig cfg;
        cfg.ic_kind = "perturbed_black";
        cfg.eps = 1e-2;
        cfg.T = 20.0;
        cfg.seed = seed;
        StabilityRun r = run_stability(cfg);
        const StabilityReport& p = r.report;
        double k = p.max_rate_sum / cfg.eps;
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
        ok = ok && p.ratio <= 10.0 && p.max_abs_c <= 0.1 && p.max_rate_sum <= K * cfg.eps;
        note("seed " + std::to_string(seed) + ": ratio " + num(p.ratio) + ", max|c| " + num(p.max_abs_c) +
             ", max(|a'|+|theta'|)/eps " + num(k));
        if (seed == 1) {
            first_csv = r.csv;
            first_json = r.json;
        }
    }
    RunConfig again;
    again.ic_kind = "perturbed_black";
    again.eps = 1e-2;
    again.T = 20.0;
    again.seed = 1;
    StabilityRun rerun = run_stability(again);
    bool same = rerun.csv == first_csv && rerun.json == first_json;
    bool stable = kmax <= 2.0 * kmin;
    report(9, ok && same && stable,
           "ratio <= 10, |c| <= 0.1, rates <= K eps with K = " + num(K) + "; measured K in [" + num(kmin) + ", " +
               num(kmax) + "]; rerun byte-identical: " + (same ? "yes" : "no"));
}

// 10. integral identity and small-speed inequalities
void criterion10() {
    double lemma = 0.0;
    for (auto [b, y] : {std::pair{1.0, 0.5}, {2.0, 1.0}, {0.5, 0.3}, {3.0, 1.5}, {1.5, -0.9}}) {
        LemmaValues v = lemma_quadrature_identity(b, y);
        lemma = std::max(lemma, std::abs(v.lhs - v.rhs));
    }
    const Grid1D g = RunConfig{}.grid();
    bool ok = lemma <= 1e-10;
    double ka = 0.0, kb = 0.0, worst00 = 0.0, argmax = 0.0;
    for (double c : {-0.05, -0.1, -0.2}) {
        SmallSpeedNorms n = small_speed_norms(g, resolved_params(c, Side::minus));
        const double c2 = c * c;
        ka = std::max(ka, n.mod_L2 / c2);
        kb = std::max(kb, n.reta_L2 / c2);
        worst00 = std::max(worst00, std::abs(n.a00_sup / (0.375 * c2) - 1.0));
        argmax = std::max(argmax, std::abs(n.a00_argmax));
        // L2 families: <= c^2 / 2 (the appendix bound with K = 1); sup family: squared sup <= c^2
        ok = ok && n.mod_L2 <= 0.5 * c2 && n.reta_L2 <= 0.5 * c2 && n.a00_sup * n.a00_sup <= c2;
    }
    ok = ok && worst00 <= 0.05 && argmax <= 0.5 * g.h;
    report(10, ok,
           "identity max dev " + num(lemma) + " (tol 1e-10); max ||.||/c^2: " + num(ka) + ", " + num(kb) +
               " (bound 0.5); a00 max at x=" + num(argmax) + ", off (3/8)c^2 by " + num(100.0 * worst00) +
               "% (tol 5%)");
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    auto tv = std::chrono::steady_clock::now();
    std::vector<CheckRow> rows = verify_suite(RunConfig{});
    double verify_seconds = seconds_since(tv);

    criterion1(rows, verify_seconds);
    criterion2(rows);
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();

    std::printf("%d of 10 criteria failed (%.1f s)\n", failures, seconds_since(t0));
    return failures;
}
