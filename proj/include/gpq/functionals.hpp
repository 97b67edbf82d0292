#pragma once

#include <optional>
#include <vector>

#include "gpq/solitons.hpp"

namespace gpq {

struct ConservedSet {
    double mass = 0.0;
    double p_classical = 0.0;
    std::optional<double> p_modified;  // empty when |u| >= 1/4 fails off [-1, 1]
    double E1 = 0.0;
    double E2 = 0.0;
};

// smoothstep cut-off: 1 on [-1,1], 0 outside [-2,2]
struct CutoffProfile {
    RVec chi;
    RVec dchi;
};
CutoffProfile make_cutoff(const Grid1D& g);
double cutoff(double x);
double cutoff_derivative(double x);

struct PerturbationView {
    CVec z;
    RVec rho;  // |phi + z|^2 - |phi|^2
    DarkParams params;
};
PerturbationView make_perturbation(const CVec& u, const Grid1D& g, const DarkParams& p);

// conserved() never throws VacuumViolation: p_modified is simply left empty
ConservedSet conserved(const CVec& u, const Grid1D& g, bool with_modified = true);
double modified_momentum(const CVec& u, const Grid1D& g);
// same functional with the cut-off integrand sampled pointwise (cross-check)
double modified_momentum_cutoff(const CVec& u, const Grid1D& g);
RVec unwrapped_phase(const CVec& u, const Grid1D& g);  // valid on |x| > 1, NaN inside

// distance between two values of P, which is only defined modulo pi
double mod_pi_distance(double a, double b);

double mass(const CVec& u, const Grid1D& g);
double E2(const CVec& u, const Grid1D& g);

double weighted_norm(const CVec& f, const Grid1D& g, const DarkParams& p);
double weighted_norm(const CVec& f, const Grid1D& g, const RVec& eta);
double distance_dc(const CVec& u1, const CVec& u2, const Grid1D& g, const DarkParams& p);
double quadratic_form(const CVec& z, const Grid1D& g, const DarkParams& p);
double nonlinear_remainder(const CVec& z, const Grid1D& g, const DarkParams& p);

// linear term of the dark expansion: -c * int 2 Re(i phi_c' conj z)
double expansion_linear_term(const CVec& z, const Grid1D& g, const DarkParams& p);

bool energy_floor_probe(const std::vector<CVec>& candidates, const Grid1D& g);

// steepened kink sqrt2 tanh(bx)/sqrt(3 - tanh^2(bx))
CVec kink(const Grid1D& g, double beta);

CVec to_complex(const RVec& f);

// small-c comparisons between phi_c and phi0, all from cancellation-free omega forms
struct SmallSpeedNorms {
    double mod_L2;     // ||(|phi_c|^2 - phi0^2) / sqrt(eta0)||_L2
    double reta_L2;    // ||(phi0 eta0 - R_c eta_c) / sqrt(eta0)||_L2
    double a00_sup;    // sup |(|phi_c|^2 - phi0^2) / ((1 + x^2) eta_c)|
    double a00_argmax; // node where the sup is attained
};
SmallSpeedNorms small_speed_norms(const Grid1D& g, const DarkParams& p);

}  // namespace gpq
