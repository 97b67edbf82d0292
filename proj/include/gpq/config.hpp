#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "gpq/evolution.hpp"

namespace gpq {

// `key = value` lines with dotted keys; '#' starts a comment
struct RunConfig {
    double L = 30.0;  // grid.L
    int N = 4097;     // grid.N
    double dt = 1e-3; // time.dt
    double T = 10.0;  // time.T

    std::string ic_kind = "black";  // black | dark | uniform | perturbed_black
    double c = -0.3;
    std::optional<Side> side;  // default: minus for c <= 0
    double eps = 1e-2;
    std::uint64_t seed = 1;
    double a0 = 0.0;
    double theta0 = 0.0;
    double u0 = 0.9;  // modulus of uniform data

    double speed_cap = 0.5;
    double newton_tol = 1e-10;
    double picard_tol = 1e-12;
    std::optional<double> verify_tol;  // replaces every verify tolerance when set

    std::string out_dir = "gpq_out";
    std::optional<BcMode> bc;  // default depends on ic.kind
    int laplacian_order = 4;
    int spectrum_k = 6;
    std::string snapshot;  // modulate.snapshot

    Side resolved_side() const;
    BcMode resolved_bc() const;
    Grid1D grid() const { return make_grid(L, N); }
    SchemeConfig scheme() const;
    FitOptions fit_options() const;
};

RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

// throws ConfigError naming the offending key
void validate(const RunConfig& cfg);

}  // namespace gpq
