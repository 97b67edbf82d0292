#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpq/functionals.hpp"
#include "gpq/modulation.hpp"

namespace gpq {

enum class BcMode { pinned_static, pinned_exact, neumann };
const char* bc_name(BcMode m);
BcMode bc_from_string(const std::string& s);

struct SchemeConfig {
    double dt = 1e-3;
    double picard_tol = 1e-12;
    int picard_max = 25;
    BcMode bc = BcMode::pinned_static;
    int laplacian_order = 4;  // 2: 3-point, 4: 5-point interior
};

// endpoint values (u(-L), u(L)) at time t, for pinned_exact
using BoundaryFn = std::function<std::pair<cplx, cplx>(double t)>;

// Crank-Nicolson midpoint stepper. The linear part is factored once (banded LU)
// and reused by every Picard iteration.
class Stepper {
public:
    Stepper(const Grid1D& g, const SchemeConfig& cfg, BoundaryFn exact = {});

    // u(t) -> u(t + dt); dt may be negative
    void step(CVec& u, double t);

    const SchemeConfig& config() const { return cfg_; }
    const Grid1D& grid() const { return g_; }
    int last_iterations() const { return last_iter_; }

    // discrete Laplacian rows used by the scheme (boundary rows per bc)
    void apply_laplacian(const CVec& u, CVec& out) const;

private:
    void build();

    Grid1D g_;
    SchemeConfig cfg_;
    BoundaryFn exact_;
    std::vector<std::array<double, 5>> lap_;  // offsets -2..2
    std::vector<cplx> ab_;                    // LAPACK band storage
    std::vector<int> ipiv_;
    CVec lapu_, base_, nl_, rhs_, next_, zero_;
    int last_iter_ = 0;
};

struct Trajectory {
    RVec times;
    std::vector<ConservedSet> conserved;
    std::vector<std::optional<ModulationState>> modulation;
    RVec d0;    // d_0(e^{-i theta} u(. + a), phi_0); NaN between fit samples
    RVec z_H0;  // ||e^{-i theta} u(. + a) - phi_c||_{H0}; NaN between fit samples
    std::vector<std::pair<double, CVec>> snapshots;
    CVec final_u;
};

struct EvolveOptions {
    int fit_every = 10;  // 0: no modulation tracking
    ModulationState guess{};
    FitOptions fit{};
    int snapshot_every = 0;
    std::function<void(double, const CVec&)> on_step;  // called after every step (and at t = 0)
    std::function<void(double, const CVec&, const ModulationState&)> on_fit;  // after each fit sample
};

Trajectory evolve(const CVec& u0, const Grid1D& g, double T, const SchemeConfig& cfg,
                  const EvolveOptions& opt = {}, BoundaryFn exact = {});

struct OrderReport {
    double temporal;        // uniform solution, dt halving
    double spatial;         // black soliton, h halving, 3-point Laplacian
    double spatial_order4;  // same with the 5-point Laplacian
};
OrderReport order_check();

// uniform data r e^{i(1 - r^4) t}
inline cplx uniform_exact(double r, double t) { return r * std::exp(cplx(0.0, (1.0 - r * r * r * r) * t)); }

// zero crossing of Re u nearest to x0 (linear interpolation)
double track_zero(const CVec& u, const Grid1D& g, double x0);

}  // namespace gpq
