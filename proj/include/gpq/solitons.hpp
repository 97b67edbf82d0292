#pragma once

#include <utility>

#include "gpq/grid.hpp"

namespace gpq {

// minus: the family whose c -> 0 limit is +phi0; plus: limit -phi0
enum class Side { minus, plus };

const char* side_name(Side s);
Side side_from_string(const std::string& s);
Side default_side(double c);

struct DarkParams {
    double c = 0.0;
    double kappa = 1.0;
    double mu1 = 0.0;  // as printed, before sign_fix
    double mu2 = 0.0;
    double mu = -1.0 / 3.0;
    Side side = Side::minus;
    int s1 = 1, s2 = 1;
    bool resolved = false;

    double m1() const { return s1 * mu1; }  // effective values after sign_fix
    double m2() const { return s2 * mu2; }
};

// printed parameter formulas (evaluated without cancellation); unresolved
DarkParams dark_params(double c, Side side);
// dark_params followed by the closed-form sign rule (same answer as sign_branch_search)
DarkParams resolved_params(double c, Side side);
// c = 0 on the minus side, i.e. +phi0
DarkParams black_params();

// Pointwise values of a resolved profile at x.
struct ProfilePoint {
    cplx phi;
    cplx dphi;
    cplx q;        // dphi / eta
    double omega;  // 1 - |phi|^2, cancellation free
    double eta;    // 1 - |phi|^4
};
ProfilePoint eval_profile(const DarkParams& p, double x);

// black soliton
double phi0(double x);
double dphi0(double x);
double d2phi0(double x);
double omega0(double x);  // 1 - phi0^2
double eta0(double x);

std::pair<RVec, RVec> black_profile(const Grid1D& g);
RVec eta_black(const Grid1D& g);

CVec dark_profile(const Grid1D& g, const DarkParams& p);
CVec dark_derivative(const Grid1D& g, const DarkParams& p);
CVec weight_q(const Grid1D& g, const DarkParams& p);
RVec eta_weight(const Grid1D& g, const DarkParams& p);
RVec omega_weight(const Grid1D& g, const DarkParams& p);

// centered c-derivatives (step dc) of phi_c, dphi_c, q_c, eta_c
struct ProfileFields {
    CVec phi, dphi, q;
    RVec eta;
};
ProfileFields profile_fields(const Grid1D& g, const DarkParams& p);
ProfileFields profile_c_derivative(const Grid1D& g, const DarkParams& p, double dc = 1e-4);

struct Residuals {
    double sup_stationary = 0.0;
    double sup_traveling = 0.0;
    double sup_first_order = 0.0;  // black only; NaN for c != 0
};
// c == 0: analytic derivatives; otherwise FD second derivative
Residuals residuals(const Grid1D& g, const DarkParams& p);
double traveling_residual_fd(const Grid1D& g, const DarkParams& p);

DarkParams sign_branch_search(DarkParams p, const Grid1D& g);

struct ClosedFormCatalog {
    double E2_dark;
    double P_dark;
    double grad_L2;
    double dphi_over_sqrt_etac_L2sq;
    double sup_dphi_over_sqrt_eta0_sq;
    double sup_Ic;
};
ClosedFormCatalog closed_forms(const DarkParams& p);

// arctan(sqrt(mu)) / sqrt(mu), real for any real mu (arctanh branch when mu < 0)
double atan_ratio(double mu);

// black-soliton constants
double E2_black();    // 2 sqrt3 artanh(1/sqrt3)
double mass_black();  // sqrt3 ln(2 + sqrt3), same number

struct LemmaValues {
    double lhs;
    double rhs;
};
LemmaValues lemma_quadrature_identity(double b, double y);

}  // namespace gpq
