#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpq/config.hpp"

namespace gpq {

// one row of the identity suite; status is PASS, FAIL or ERRATUM (printed
// value disagrees with quadrature, which is taken as authoritative)
struct CheckRow {
    std::string name;
    double value;
    double reference;
    double tol;
    std::string status;
    std::string source;  // closed_form | quadrature | eigensolve | regression | fit | measured
};

std::vector<CheckRow> verify_suite(const RunConfig& cfg);

// quadratic coefficient of E2[phi_c] - E2[phi0], least squares on c in [-0.2, -0.02]
double energy_c2_coefficient(const Grid1D& g);
// linear coefficient of P[phi_c] - P[phi0] (mod pi), least squares on c in [-0.1, -0.01]
double momentum_slope(const Grid1D& g);

struct Bump {
    double center;
    double width;
    cplx amp;
};
std::array<Bump, 3> seed_bumps(std::uint64_t seed);
CVec bump_field(const Grid1D& g, const std::array<Bump, 3>& b);
// e^{i theta0} phi0(. - a0) + s * bumps, s bisected so that d0(u0, e^{i theta0} phi0(. - a0)) = eps
CVec perturbed_black(const Grid1D& g, double eps, std::uint64_t seed, double a0, double theta0);

struct InitialData {
    CVec u;
    BoundaryFn exact;  // empty unless an exact solution is known
    ModulationState guess;
};
InitialData initial_data(const RunConfig& cfg);

struct StabilityReport {
    double d0_initial = 0.0;
    double d0_max = 0.0;
    double ratio = 1.0;
    double max_abs_c = 0.0;
    double max_abs_da = 0.0;
    double max_abs_dtheta = 0.0;
    double max_rate_sum = 0.0;  // max over samples of |a'| + |theta'|
    bool pass = false;
};

inline constexpr const char* kStabilityHeader = "t,c,a,theta,mass,p_classical,p_modified,E1,E2,z_H0,d0";

struct StabilityRun {
    StabilityReport report;
    std::string csv;
    std::string json;
};
StabilityRun run_stability(const RunConfig& cfg);

// commands write into cfg.out_dir and return the exit code (0 pass, 1 check
// failure); errors propagate as gpq::Error
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_spectrum(const RunConfig& cfg, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, std::ostream& log);
int cmd_modulate(const RunConfig& cfg, std::ostream& log);
int cmd_stability(const RunConfig& cfg, std::ostream& log);
int cmd_profile(const RunConfig& cfg, std::ostream& log);

// runs a command by name and maps errors to exit codes 2 (config) / 3 (numerical)
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace gpq
