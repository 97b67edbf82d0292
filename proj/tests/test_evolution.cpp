#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gpq/errors.hpp"
#include "gpq/evolution.hpp"
#include "gpq/io.hpp"

using namespace gpq;

namespace {
CVec bumped_black(const Grid1D& g) {
    return sample_complex(g, [](double x) { return phi0(x) + cplx(0.02, 0.01) * std::exp(-(x - 1.0) * (x - 1.0)); });
}
}  // namespace

TEST_CASE("vacuum is a fixed point") {
    Grid1D g = make_grid(10.0, 257);
    for (BcMode bc : {BcMode::pinned_static, BcMode::neumann}) {
        SchemeConfig cfg;
        cfg.bc = bc;
        Stepper s(g, cfg);
        CVec u(g.size(), 1.0);
        for (int n = 0; n < 20; ++n) s.step(u, n * cfg.dt);
        for (auto v : u) CHECK(std::abs(v - 1.0) <= 1e-14);
    }
}

TEST_CASE("uniform data follows the exact phase") {
    Grid1D g = make_grid(4.0, 33);
    SchemeConfig cfg;
    cfg.bc = BcMode::neumann;
    cfg.dt = 1e-2;
    Trajectory tr = evolve(CVec(g.size(), 0.9), g, 1.0, cfg, {.fit_every = 0});
    double e = sup_abs([&] {
        CVec d = tr.final_u;
        for (auto& v : d) v -= uniform_exact(0.9, 1.0);
        return d;
    }());
    CHECK(e <= 1e-4);
    CHECK(e > 0.0);
}

TEST_CASE("convergence orders") {
    OrderReport r = order_check();
    CHECK(r.temporal == doctest::Approx(2.0).epsilon(0.05));
    CHECK(r.spatial == doctest::Approx(2.0).epsilon(0.05));
    CHECK(r.spatial_order4 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("time reversibility") {
    Grid1D g = make_grid(15.0, 513);
    SchemeConfig fwd;
    SchemeConfig bwd = fwd;
    bwd.dt = -fwd.dt;
    Stepper a(g, fwd), b(g, bwd);
    CVec u0 = bumped_black(g), u = u0;
    a.step(u, 0.0);
    b.step(u, fwd.dt);
    CHECK(sup_diff(u, u0) <= 10.0 * fwd.picard_tol);
}

TEST_CASE("gauge covariance") {
    Grid1D g = make_grid(15.0, 513);
    SchemeConfig cfg;
    CVec u0 = bumped_black(g), v0 = u0;
    const cplx ph = std::exp(cplx(0.0, 0.8));
    for (auto& v : v0) v *= ph;
    Trajectory a = evolve(u0, g, 0.2, cfg, {.fit_every = 0});
    Trajectory b = evolve(v0, g, 0.2, cfg, {.fit_every = 0});
    CVec r = a.final_u;
    for (auto& v : r) v *= ph;
    CHECK(sup_diff(r, b.final_u) <= 1e-10);
}

TEST_CASE("boundary does not leak into soliton functionals") {
    const DarkParams p = resolved_params(-0.3, Side::minus);
    SchemeConfig cfg;
    cfg.bc = BcMode::pinned_exact;
    auto run = [&](double L, int N) {
        Grid1D g = make_grid(L, N);
        BoundaryFn ex = [p, L](double t) {
            return std::pair{eval_profile(p, -L - p.c * t).phi, eval_profile(p, L - p.c * t).phi};
        };
        return evolve(dark_profile(g, p), g, 0.5, cfg, {.fit_every = 0}, ex).conserved.back();
    };
    ConservedSet a = run(20.0, 2049), b = run(40.0, 4097);
    CHECK(std::abs(a.E2 - b.E2) <= 1e-10);
    CHECK(std::abs(a.E1 - b.E1) <= 1e-10);
    CHECK(std::abs(a.mass - b.mass) <= 1e-10);
    CHECK(std::abs(a.p_classical - b.p_classical) <= 1e-10);
    CHECK(mod_pi_distance(*a.p_modified, *b.p_modified) <= 1e-10);
}

TEST_CASE("oversized step is flagged") {
    Grid1D g = make_grid(15.0, 513);
    SchemeConfig cfg;
    cfg.dt = 0.5;
    CVec u = sample_complex(g, [](double x) { return phi0(x) + 0.8 * std::exp(-x * x); });
    Stepper s(g, cfg);
    bool flagged = false;
    try {
        for (int n = 0; n < 40; ++n) s.step(u, n * cfg.dt);
    } catch (const Error& e) {
        flagged = e.code() == Errc::PicardDivergence || e.code() == Errc::NonFiniteField;
    }
    CHECK(flagged);
}

TEST_CASE("stepper preconditions") {
    Grid1D g = make_grid(5.0, 65);
    SchemeConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(Stepper(g, cfg), Error);
    cfg.dt = 1e-3;
    cfg.bc = BcMode::pinned_exact;
    CHECK_THROWS_AS(Stepper(g, cfg), Error);
    cfg.bc = BcMode::neumann;
    cfg.laplacian_order = 3;
    CHECK_THROWS_AS(Stepper(g, cfg), Error);
    CHECK(bc_from_string(bc_name(BcMode::pinned_exact)) == BcMode::pinned_exact);
}

TEST_CASE("zero tracking") {
    Grid1D g = make_grid(10.0, 1025);
    CVec u = sample_complex(g, [](double x) { return cplx(std::tanh(x - 0.3217), 0.1); });
    CHECK(track_zero(u, g, 0.0) == doctest::Approx(0.3217).epsilon(1e-5));
}

TEST_CASE("snapshot round trip") {
    Grid1D g = make_grid(3.0, 65);
    CVec u = sample_complex(g, [](double x) { return cplx(std::tanh(x) / 3.0, 1e-300 + std::sin(x) * 1e7); });
    std::stringstream ss;
    write_snapshot(ss, g, u, 0.125);
    std::string first;
    std::getline(ss, first);
    CHECK(first.rfind("# L=", 0) == 0);
    ss.seekg(0);
    Snapshot s = read_snapshot(ss);
    CHECK(s.grid.N == g.N);
    CHECK(s.grid.L == g.L);
    CHECK(s.t == 0.125);
    CHECK(s.u == u);  // 17 digits round-trip exactly

    std::stringstream bad("# L=3 N=65 t=0\n-3 1 0\n");
    CHECK_THROWS_AS(read_snapshot(bad), Error);
}
