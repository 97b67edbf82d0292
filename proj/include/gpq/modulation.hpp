#pragma once

#include <array>

#include "gpq/solitons.hpp"

namespace gpq {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

struct ModulationState {
    double c = 0.0;
    double a = 0.0;
    double theta = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
};

struct FitOptions {
    double speed_cap = 0.5;
    double newton_tol = 1e-10;
    int max_iter = 50;
    double fd_step = 1e-6;
    Side side = Side::minus;
};

// z = e^{-i theta} w(. + a) - phi_c
CVec modulation_z(const CVec& w, const Grid1D& g, double c, double a, double theta, Side side);

// (int <eta, conj(q) z>, int <i eta, conj(q) z>, int <i R eta, conj(q) z>)
Vec3 ortho_residual(const CVec& w, const Grid1D& g, double c, double a, double theta,
                    Side side = Side::minus);

// forward-difference Jacobian of ortho_residual in (a, c, theta)
Mat3 fd_jacobian(const CVec& w, const Grid1D& g, double c, double a, double theta, Side side,
                 double step = 1e-6);

ModulationState fit(const CVec& w, const Grid1D& g, const ModulationState& guess,
                    const FitOptions& opt = {});

// M(c,z) with columns ordered (a', c', theta'); M = m + n
struct ModMatrix {
    Mat3 M;
    Mat3 m;  // z-independent part, signed as it enters M
    Mat3 n;  // z-dependent quadratures
};
struct DriverTriple {
    Vec3 B;
};

ModMatrix modulation_matrix(double c, const CVec& z, const Grid1D& g, Side side = Side::minus);
DriverTriple driver(double c, const CVec& z, const Grid1D& g, Side side = Side::minus);

struct Rates {
    double da;      // a'
    double dc;      // c'
    double dtheta;  // theta'
};
Rates rates(double c, const CVec& z, const Grid1D& g, Side side = Side::minus);

struct OriginOracle {
    ModMatrix M;     // at (0 on the requested side, z = 0)
    double det;
    double AA, BB, CC, DD, EE;
};
OriginOracle jacobian_origin_oracle(const Grid1D& g, Side side = Side::minus);

double det3(const Mat3& A);
Vec3 solve3(const Mat3& A, const Vec3& b);
double cond_inf(const Mat3& A);

}  // namespace gpq
