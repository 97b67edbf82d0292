#include "gpq/evolution.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <tuple>

#include "gpq/errors.hpp"

namespace gpq {

namespace {
constexpr int KL = 2, KU = 2, LDAB = 2 * KL + KU + 1;
const cplx I(0.0, 1.0);
}  // namespace

const char* bc_name(BcMode m) {
    switch (m) {
        case BcMode::pinned_static: return "pinned_static";
        case BcMode::pinned_exact: return "pinned_exact";
        case BcMode::neumann: return "neumann";
    }
    return "?";
}

BcMode bc_from_string(const std::string& s) {
    if (s == "pinned_static") return BcMode::pinned_static;
    if (s == "pinned_exact") return BcMode::pinned_exact;
    if (s == "neumann") return BcMode::neumann;
    throw Error(Errc::ConfigError, "unknown boundary mode '" + s + "'");
}

Stepper::Stepper(const Grid1D& g, const SchemeConfig& cfg, BoundaryFn exact)
    : g_(g), cfg_(cfg), exact_(std::move(exact)) {
    if (!(cfg.dt != 0.0) || !std::isfinite(cfg.dt)) throw Error(Errc::DomainError, "dt must be finite and nonzero");
    if (cfg.picard_max < 2) throw Error(Errc::DomainError, "picard_max must be >= 2");
    if (cfg.laplacian_order != 2 && cfg.laplacian_order != 4)
        throw Error(Errc::DomainError, "laplacian_order must be 2 or 4");
    if (cfg.bc == BcMode::pinned_exact && !exact_)
        throw Error(Errc::DomainError, "pinned_exact needs an exact boundary function");
    build();
}

void Stepper::build() {
    const int n = g_.N;
    const double h2 = g_.h * g_.h;
    lap_.assign(n, {0, 0, 0, 0, 0});
    auto three = [&](int i) { lap_[i] = {0, 1 / h2, -2 / h2, 1 / h2, 0}; };
    auto five = [&](int i) {
        const double s = 1.0 / (12.0 * h2);
        lap_[i] = {-s, 16 * s, -30 * s, 16 * s, -s};
    };
    const bool o4 = cfg_.laplacian_order == 4;
    for (int i = 1; i < n - 1; ++i) {
        if (o4 && i >= 2 && i <= n - 3)
            five(i);
        else
            three(i);
    }
    if (cfg_.bc == BcMode::neumann) {
        // even reflection across the end nodes
        if (o4) {
            const double s = 1.0 / (12.0 * h2);
            lap_[0] = {0, 0, -30 * s, 32 * s, -2 * s};
            lap_[1] = {0, 16 * s, -31 * s, 16 * s, -s};
            lap_[n - 1] = {-2 * s, 32 * s, -30 * s, 0, 0};
            lap_[n - 2] = {-s, 16 * s, -31 * s, 16 * s, 0};
        } else {
            lap_[0] = {0, 0, -2 / h2, 2 / h2, 0};
            lap_[n - 1] = {0, 2 / h2, -2 / h2, 0, 0};
        }
    }

    // A = I - (i dt / 2) Lap, identity on pinned rows
    ab_.assign(static_cast<std::size_t>(LDAB) * n, cplx(0.0));
    const bool pinned = cfg_.bc != BcMode::neumann;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 5; ++k) {
            int j = i + k - 2;
            if (j < 0 || j >= n) continue;
            cplx v = -0.5 * I * cfg_.dt * lap_[i][k];
            if (j == i) v += 1.0;
            if (pinned && (i == 0 || i == n - 1)) v = (j == i) ? cplx(1.0) : cplx(0.0);
            ab_[(KL + KU + i - j) + static_cast<std::size_t>(j) * LDAB] = v;
        }
    }
    ipiv_.assign(n, 0);
    lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, KL, KU,
                                     reinterpret_cast<lapack_complex_double*>(ab_.data()), LDAB, ipiv_.data());
    if (info != 0) throw Error(Errc::DomainError, "CN matrix factorization failed");

    lapu_.assign(n, 0.0);
    base_.assign(n, 0.0);
    nl_.assign(n, 0.0);
    rhs_.assign(n, 0.0);
    next_.assign(n, 0.0);
    zero_.assign(n, 0.0);
}

void Stepper::apply_laplacian(const CVec& u, CVec& out) const {
    const std::size_t n = u.size();
    out.resize(n);
    for_nodes(n, [&](std::size_t i) {
        const auto& c = lap_[i];
        cplx s = c[2] * u[i];
        if (i >= 1) s += c[1] * u[i - 1];
        if (i >= 2) s += c[0] * u[i - 2];
        if (i + 1 < n) s += c[3] * u[i + 1];
        if (i + 2 < n) s += c[4] * u[i + 2];
        out[i] = s;
    });
}

void Stepper::step(CVec& u, double t) {
    const std::size_t n = u.size();
    if (n != g_.size()) throw Error(Errc::DomainError, "field size does not match grid");
    const double dt = cfg_.dt;
    const bool pinned = cfg_.bc != BcMode::neumann;
    cplx left = u.front(), right = u.back();
    if (cfg_.bc == BcMode::pinned_exact) std::tie(left, right) = exact_(t + dt);

    apply_laplacian(u, lapu_);
    kernels::axpby3(1.0, u.data(), 0.5 * I * dt, lapu_.data(), zero_.data(), base_.data(), n);

    CVec& cur = next_;
    cur = u;
    if (pinned) {
        cur.front() = left;
        cur.back() = right;
    }
    double prev_diff = std::numeric_limits<double>::infinity();
    int growth = 0;
    for (int it = 1; it <= cfg_.picard_max; ++it) {
        kernels::quintic_midpoint(u.data(), cur.data(), nl_.data(), n);
        kernels::axpby3(-I * dt, nl_.data(), 1.0, base_.data(), zero_.data(), rhs_.data(), n);
        if (pinned) {
            rhs_.front() = left;
            rhs_.back() = right;
        }
        lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n), KL, KU, 1,
                                         reinterpret_cast<const lapack_complex_double*>(ab_.data()), LDAB,
                                         ipiv_.data(), reinterpret_cast<lapack_complex_double*>(rhs_.data()),
                                         static_cast<lapack_int>(n));
        if (info != 0) throw Error(Errc::DomainError, "banded solve failed");
        double diff = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx v = rhs_[i];
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) finite = false;
            diff = std::max(diff, std::abs(v - cur[i]));
        }
        if (!finite) throw Error(Errc::NonFiniteField, "non-finite value during Picard iteration");
        cur.swap(rhs_);
        if (diff <= cfg_.picard_tol) {
            last_iter_ = it;
            u.swap(cur);
            return;
        }
        growth = diff > prev_diff ? growth + 1 : 0;
        if (growth >= 3) throw Error(Errc::PicardDivergence, "residual grew over 3 consecutive iterations");
        prev_diff = diff;
    }
    throw Error(Errc::PicardDivergence, "no convergence within picard_max iterations");
}

double track_zero(const CVec& u, const Grid1D& g, double x0) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i + 1 < g.N; ++i) {
        double a = u[i].real(), b = u[i + 1].real();
        if ((a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0)) {
            double x = g.x(i) + g.h * a / (a - b);
            if (std::isnan(best) || std::abs(x - x0) < std::abs(best - x0)) best = x;
        }
    }
    if (std::isnan(best)) throw Error(Errc::DomainError, "Re u has no zero crossing");
    return best;
}

Trajectory evolve(const CVec& u0, const Grid1D& g, double T, const SchemeConfig& cfg, const EvolveOptions& opt,
                  BoundaryFn exact) {
    check_field(u0, g);
    if (!(T >= 0.0)) throw Error(Errc::DomainError, "T must be >= 0");
    Stepper st(g, cfg, std::move(exact));
    const long nsteps = std::lround(T / std::abs(cfg.dt));
    const DarkParams black = black_params();
    const CVec phi_black = to_complex(black_profile(g).first);

    Trajectory tr;
    CVec u = u0;
    ModulationState state = opt.guess;

    auto record = [&](long k) {
        const double t = k * cfg.dt;
        const bool sample = opt.fit_every > 0 && k % opt.fit_every == 0;
        ConservedSet cs = conserved(u, g, opt.fit_every == 0);
        std::optional<ModulationState> ms;
        double d0 = std::numeric_limits<double>::quiet_NaN(), zh = d0;
        if (sample) {
            state = fit(u, g, state, opt.fit);
            ms = state;
            CVec ub = shift_phase(u, g, state.a, state.theta);
            try {
                cs.p_modified = modified_momentum(ub, g);
            } catch (const Error& e) {
                if (e.code() != Errc::VacuumViolation && e.code() != Errc::UnwrapAmbiguity) throw;
                cs.p_modified.reset();
            }
            d0 = distance_dc(ub, phi_black, g, black);
            CVec z = ub;
            CVec phic = dark_profile(g, resolved_params(state.c, opt.fit.side));
            for (std::size_t i = 0; i < z.size(); ++i) z[i] -= phic[i];
            zh = weighted_norm(z, g, black);
            if (opt.on_fit) opt.on_fit(t, u, state);
        }
        tr.times.push_back(t);
        tr.conserved.push_back(cs);
        tr.modulation.push_back(ms);
        tr.d0.push_back(d0);
        tr.z_H0.push_back(zh);
        if (opt.snapshot_every > 0 && k % opt.snapshot_every == 0) tr.snapshots.emplace_back(t, u);
        if (opt.on_step) opt.on_step(t, u);
    };

    record(0);
    for (long k = 1; k <= nsteps; ++k) {
        st.step(u, (k - 1) * cfg.dt);
        record(k);
    }
    tr.final_u = std::move(u);
    return tr;
}

namespace {
double uniform_error(double dt) {
    Grid1D g = make_grid(4.0, 33);
    SchemeConfig cfg;
    cfg.dt = dt;
    cfg.bc = BcMode::neumann;
    Stepper st(g, cfg);
    const double r = 0.9, T = 1.0;
    CVec u(g.size(), cplx(r));
    const long n = std::lround(T / dt);
    for (long k = 0; k < n; ++k) st.step(u, k * dt);
    double e = 0.0;
    for (auto v : u) e = std::max(e, std::abs(v - uniform_exact(r, T)));
    return e;
}

double black_error(int N, int order) {
    Grid1D g = make_grid(20.0, N);
    SchemeConfig cfg;
    cfg.dt = 5e-3;
    cfg.laplacian_order = order;
    Stepper st(g, cfg);
    CVec phi = to_complex(black_profile(g).first);
    CVec u = phi;
    for (int k = 0; k < 200; ++k) st.step(u, k * cfg.dt);
    return sup_diff(u, phi);
}
}  // namespace

OrderReport order_check() {
    OrderReport r;
    r.temporal = std::log2(uniform_error(0.02) / uniform_error(0.01));
    r.spatial = std::log2(black_error(257, 2) / black_error(513, 2));
    r.spatial_order4 = std::log2(black_error(129, 4) / black_error(257, 4));
    return r;
}

}  // namespace gpq
