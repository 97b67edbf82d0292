#include <doctest.h>

#include <cmath>
#include <random>

#include "gpq/functionals.hpp"
#include "gpq/spectral.hpp"

using namespace gpq;

namespace {
const Pencil& pencil() {
    static Pencil P = assemble_pencil(make_grid(30.0, 4097));
    return P;
}
const SpectralResult& spectrum() {
    static SpectralResult r = solve_lowest(pencil(), 4);
    return r;
}
}  // namespace

TEST_CASE("pencil assembly") {
    const Pencil& P = pencil();
    RVec one(P.grid.size(), 1.0);
    CHECK(sup_abs(apply_A(P, one)) <= 1e-12);
    double tot = 0.0;
    for (double b : P.b) tot += b;
    CHECK(tot == doctest::Approx(3.0).epsilon(1e-8));
    // -phi0'' = eta0 phi0 nodewise; B's Simpson weights alternate, so compare with h eta0
    RVec a = apply_A(P, P.phi0);
    const double h = P.grid.h;
    double e = 0.0;
    for (std::size_t i = 1; i + 1 < a.size(); ++i)
        e = std::max(e, std::abs(a[i] - h * eta0(P.grid.x(int(i))) * P.phi0[i]));
    CHECK(e <= 1e-6);
}

TEST_CASE("lowest eigenpairs") {
    const SpectralResult& r = spectrum();
    CHECK(std::abs(r.sigma[0]) <= 1e-8);
    CHECK(r.lambda[0] == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(std::abs(r.sigma[1] - 1.0) <= 1e-4);
    CHECK(r.sigma[2] > 1.0);
    CHECK(r.lambda[2] > 0.0);
    CHECK(r.lambda[2] == doctest::Approx(kLambda2Grid).epsilon(1e-9));
    for (int k = 0; k < 4; ++k) CHECK(sign_changes(r.fields[k]) == k);
    // constant eigenfield
    const RVec& f0 = r.fields[0];
    double lo = f0[0], hi = f0[0];
    for (double v : f0) lo = std::min(lo, v), hi = std::max(hi, v);
    CHECK(hi - lo <= 1e-6 * std::abs(hi));
    // Sturm counts bracket each eigenvalue
    for (int k = 0; k < 4; ++k) {
        CHECK(count_below(pencil(), r.sigma[k] * (1 - 1e-6) - 1e-12) == k);
        CHECK(count_below(pencil(), r.sigma[k] * (1 + 1e-6) + 1e-12) == k + 1);
    }
}

TEST_CASE("higher eigenvalues accumulate below one half") {
    SpectralResult r = solve_lowest(pencil(), 10);
    for (int k = 1; k < 10; ++k) CHECK(r.lambda[k] > r.lambda[k - 1]);
    CHECK(r.lambda[9] < 0.5);
    CHECK(r.lambda[9] == doctest::Approx(0.4806684920).epsilon(1e-8));
    // Richardson over N in {2049, 4097}
    SpectralResult c = solve_lowest(assemble_pencil(make_grid(30.0, 2049)), 3);
    CHECK(richardson2(c.lambda[2], r.lambda[2]) == doctest::Approx(kLambda2Extrapolated).epsilon(1e-9));
}

TEST_CASE("sigma lambda map") {
    CHECK(sigma_to_lambda(0.0) == -0.5);
    CHECK(sigma_to_lambda(1.0) == 0.0);
    CHECK(sigma_to_lambda(1e12) == doctest::Approx(0.5));
    CHECK(lambda_to_sigma(sigma_to_lambda(3.7)) == doctest::Approx(3.7).epsilon(1e-14));
}

TEST_CASE("admissible projection") {
    const Pencil& P = pencil();
    const Grid1D& g = P.grid;
    auto means = [&](const RVec& f) {
        double m0 = 0.0, m1 = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            m0 += P.b[i] * f[i];
            m1 += P.b[i] * P.phi0[i] * f[i];
        }
        return std::max(std::abs(m0), std::abs(m1));
    };
    CHECK(sup_abs(make_admissible(P, RVec(g.size(), 1.0))) <= 1e-12);
    CHECK(sup_abs(make_admissible(P, P.phi0)) <= 1e-12);
    RVec s = sample_real(g, [](double x) { return 1.0 / std::cosh(x); });
    CHECK(means(make_admissible(P, s)) <= 1e-10);
}

TEST_CASE("coercivity") {
    const Pencil& P = pencil();
    const SpectralResult& r = spectrum();
    const RVec& e2 = r.fields[2];
    CHECK(pencil_Q0(P, e2) == doctest::Approx(r.lambda[2] * inner0(P, e2, e2)).epsilon(1e-6));
    CHECK(coercivity_probe(P, make_admissible(P, P.phi0), r));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int ok = 0;
    for (int n = 0; n < 100; ++n) {
        double a = U(rng), b = 0.5 + std::abs(U(rng)) * 2.0, x0 = 4.0 * U(rng), k = 2.0 * U(rng);
        RVec f = sample_real(P.grid, [&](double x) {
            double y = (x - x0) / b;
            return a * std::exp(-y * y) * std::cos(k * x) + 0.2 * std::tanh(x - x0);
        });
        ok += coercivity_probe(P, make_admissible(P, f), r);
    }
    CHECK(ok == 100);
}

TEST_CASE("pencil quotient agrees with the continuous form") {
    // the discrete B carries alternating Simpson weights, so the two differ at O(h^2);
    // measured in units of <f,f>_0 (the coercivity tolerance), the gap is below 1e-6 at N = 16385
    Pencil P = assemble_pencil(make_grid(30.0, 16385));
    SpectralResult r = solve_lowest(P, 3);
    const DarkParams b = black_params();
    for (int k = 1; k < 3; ++k) {
        const RVec& f = r.fields[k];
        double q = quadratic_form(to_complex(f), P.grid, b);
        CHECK(std::abs(q - pencil_Q0(P, f)) <= 1e-6 * inner0(P, f, f));
        CHECK(pencil_Q0(P, f) == doctest::Approx(r.lambda[k] * inner0(P, f, f)).epsilon(1e-10));
    }
}

TEST_CASE("sign changes with threshold") {
    CHECK(sign_changes({1.0, -1.0, 1.0}) == 2);
    CHECK(sign_changes({1.0, -1e-12, 1.0}) == 0);
    CHECK(sign_changes({0.0, 0.0}) == 0);
}
