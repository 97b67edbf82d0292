#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gpq/functionals.hpp"

using namespace gpq;

namespace {
const Grid1D& grid() {
    static Grid1D g = make_grid(30.0, 4097);
    return g;
}
CVec black() { return to_complex(black_profile(grid()).first); }
}  // namespace

TEST_CASE("vacuum has zero functionals") {
    ConservedSet s = conserved(CVec(grid().size(), 1.0), grid());
    CHECK(s.mass == 0.0);
    CHECK(s.E1 == 0.0);
    CHECK(s.E2 == 0.0);
    CHECK(s.p_classical == 0.0);
    // the left half-line phase is pinned near pi, so the vacuum representative is pi/2
    REQUIRE(s.p_modified.has_value());
    CHECK(mod_pi_distance(*s.p_modified, std::numbers::pi / 2.0) <= 1e-14);
}

TEST_CASE("black soliton functionals") {
    ConservedSet s = conserved(black(), grid());
    CHECK(s.E2 == doctest::Approx(E2_black()).epsilon(1e-8));
    CHECK(std::abs(s.mass - mass_black()) <= 1e-8);
    CHECK(s.p_classical == 0.0);
    // modified momentum of phi0 is pi/2 modulo pi (see README, errata)
    CHECK(mod_pi_distance(*s.p_modified, std::numbers::pi / 2.0) <= 1e-10);
    CHECK(std::abs(s.E2 - s.E1 - s.mass) <= 1e-10);
}

TEST_CASE("modified momentum invariances") {
    const Grid1D& g = grid();
    CVec u = dark_profile(g, resolved_params(-1.0, Side::minus));
    double p = modified_momentum(u, g);
    CHECK(p == doctest::Approx(2.682433594).epsilon(1e-9));
    // the smoothstep cut-off is only C1, so the pointwise form converges slowly
    CHECK(mod_pi_distance(p, modified_momentum_cutoff(u, g)) <= 1e-5);
    auto rotated = [&](double th) {
        CVec v = u;
        for (auto& x : v) x *= std::exp(cplx(0.0, th));
        return modified_momentum(v, g);
    };
    // invariant mod pi while neither pinning window is crossed
    for (double th : {0.25, 0.5, -0.5, 2.75, 3.0}) CHECK(mod_pi_distance(rotated(th), p) <= 1e-10);
    // crossing one window moves the representative by pi/2
    for (double th : {1.5, -1.5}) {
        CHECK(mod_pi_distance(rotated(th), p + std::numbers::pi / 2.0) <= 1e-10);
    }
    CVec s = shift_phase(u, g, 8 * g.h, 0.0);
    CHECK(mod_pi_distance(modified_momentum(s, g), p) <= 1e-9);
}

TEST_CASE("weighted norms and quadratic form") {
    const Grid1D& g = grid();
    const DarkParams b = black_params();
    CHECK(weighted_norm(CVec(g.size(), 0.0), g, b) == 0.0);
    CHECK(quadratic_form(CVec(g.size(), 0.0), g, b) == 0.0);
    CHECK(nonlinear_remainder(CVec(g.size(), 0.0), g, b) == 0.0);
    CHECK(std::abs(quadratic_form(black(), g, b)) <= 1e-8);
    CHECK(quadratic_form(CVec(g.size(), 1.0), g, b) == doctest::Approx(-1.5).epsilon(1e-8));
    double n = weighted_norm(black(), g, b);
    CHECK(n * n == doctest::Approx(E2_black()).epsilon(1e-8));
    CHECK(distance_dc(black(), black(), g, b) == 0.0);
}

TEST_CASE("energy split") {
    const Grid1D& g = grid();
    CVec z = sample_complex(g, [](double x) { return cplx(0.02, -0.01) * std::exp(-x * x); });
    for (double c : {0.0, -0.3}) {
        DarkParams p = c == 0.0 ? black_params() : resolved_params(c, Side::minus);
        CVec ph = dark_profile(g, p), u(z.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = ph[i] + z[i];
        double dE = E2(u, g) - E2(ph, g);
        double rhs = expansion_linear_term(z, g, p) + 2.0 * quadratic_form(z, g, p) + nonlinear_remainder(z, g, p);
        CHECK(std::abs(dE - rhs) <= 1e-9);
    }
}

TEST_CASE("energy floor over kinks") {
    const Grid1D& g = grid();
    CHECK(energy_floor_probe({black()}, g));
    CHECK(energy_floor_probe({kink(g, 0.5), kink(g, 2.0)}, g));
    double e1 = E2(kink(g, 1.0), g);
    CHECK(E2(kink(g, 0.9), g) > e1);
    CHECK(E2(kink(g, 1.1), g) > e1);
}

TEST_CASE("cutoff") {
    CHECK(cutoff(0.5) == 1.0);
    CHECK(cutoff(-1.0) == 1.0);
    CHECK(cutoff(2.5) == 0.0);
    CHECK(cutoff(1.5) == doctest::Approx(0.5));
    CHECK(cutoff_derivative(0.0) == 0.0);
}

TEST_CASE("vacuum violation leaves p_modified empty") {
    const Grid1D& g = grid();
    CVec u = black();
    for (int i = 0; i < g.N; ++i)
        if (std::abs(g.x(i) - 5.0) < 0.2) u[i] = 0.1;
    ConservedSet s = conserved(u, g);
    CHECK_FALSE(s.p_modified.has_value());
}
