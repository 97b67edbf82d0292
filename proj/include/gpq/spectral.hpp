#pragma once

#include <vector>

#include "gpq/grid.hpp"

namespace gpq {

// A f = sigma B f with A the Neumann stiffness matrix of -d^2/dx^2 (3-point,
// symmetric) and B = diag(simpson weight * eta0).
struct Pencil {
    Grid1D grid;
    RVec a_diag;
    RVec a_off;  // size N-1
    RVec b;      // diagonal of B
    RVec phi0;   // black profile on the grid, used for projections
};

Pencil assemble_pencil(const Grid1D& g);

RVec apply_A(const Pencil& P, const RVec& f);

// number of pencil eigenvalues strictly below s (Sturm / inertia count)
int count_below(const Pencil& P, double s);

struct SpectralResult {
    RVec sigma;                 // ascending
    RVec lambda;                // (sigma - 1) / (2 (sigma + 1))
    std::vector<RVec> fields;   // <.,.>_0-normalized
};

SpectralResult solve_lowest(const Pencil& P, int k);

double sigma_to_lambda(double sigma);
double lambda_to_sigma(double lambda);

// discrete <f,g>_0 = f.A.g + f.B.g and Q0[f] = (f.A.f - f.B.f) / 2, matching the pencil
double inner0(const Pencil& P, const RVec& f, const RVec& g);
double pencil_Q0(const Pencil& P, const RVec& f);

// removes the components along 1 and phi0 so that int eta0 f = int eta0 phi0 f = 0
RVec make_admissible(const Pencil& P, const RVec& f);

// Q0[f] >= (lambda2 - 1e-6) <f,f>_0
bool coercivity_probe(const Pencil& P, const RVec& f, const SpectralResult& r);

// sign changes after dropping entries with |f| <= thresh * max|f|
int sign_changes(const RVec& f, double thresh = 1e-8);

// lambda_2 regression values at (L=30, N=4097): raw pencil, and Richardson with N=2049
inline constexpr double kLambda2Grid = 0.270495627011;
inline constexpr double kLambda2Extrapolated = 0.270503740643;

// h^2 extrapolation from a coarse and a fine (h/2) value
inline double richardson2(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace gpq
