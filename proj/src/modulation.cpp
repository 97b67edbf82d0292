#include "gpq/modulation.hpp"

#include <cmath>
#include <string>

#include "gpq/errors.hpp"

namespace gpq {

namespace {
const cplx I(0.0, 1.0);

// the three orthogonality weights eta, i eta, i R eta
std::array<CVec, 3> weights(const ProfileFields& f) {
    std::array<CVec, 3> W;
    for (auto& w : W) w.resize(f.eta.size());
    for (std::size_t i = 0; i < f.eta.size(); ++i) {
        W[0][i] = f.eta[i];
        W[1][i] = I * f.eta[i];
        W[2][i] = I * (f.phi[i].real() * f.eta[i]);
    }
    return W;
}

// int <W_k, conj(q) v> = int Re(W_k q conj(v))
Vec3 project(const std::array<CVec, 3>& W, const CVec& q, const CVec& v, const Grid1D& g) {
    Vec3 out{};
    RVec h(v.size());
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < v.size(); ++i) h[i] = (W[k][i] * q[i] * std::conj(v[i])).real();
        out[k] = integrate(h, g);
    }
    return out;
}

CVec scaled(const CVec& v, cplx s) {
    CVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

void set_col(Mat3& A, int j, const Vec3& v) {
    for (int i = 0; i < 3; ++i) A[i][j] = v[i];
}
}  // namespace

double det3(const Mat3& A) {
    return A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
           A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
           A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
}

namespace {
Mat3 inverse3(const Mat3& A) {
    double d = det3(A);
    if (!(std::abs(d) > 0.0) || !std::isfinite(d))
        throw Error(Errc::SingularModulationMatrix, "zero determinant");
    Mat3 R;
    R[0][0] = (A[1][1] * A[2][2] - A[1][2] * A[2][1]) / d;
    R[0][1] = (A[0][2] * A[2][1] - A[0][1] * A[2][2]) / d;
    R[0][2] = (A[0][1] * A[1][2] - A[0][2] * A[1][1]) / d;
    R[1][0] = (A[1][2] * A[2][0] - A[1][0] * A[2][2]) / d;
    R[1][1] = (A[0][0] * A[2][2] - A[0][2] * A[2][0]) / d;
    R[1][2] = (A[0][2] * A[1][0] - A[0][0] * A[1][2]) / d;
    R[2][0] = (A[1][0] * A[2][1] - A[1][1] * A[2][0]) / d;
    R[2][1] = (A[0][1] * A[2][0] - A[0][0] * A[2][1]) / d;
    R[2][2] = (A[0][0] * A[1][1] - A[0][1] * A[1][0]) / d;
    return R;
}

double norm_inf(const Mat3& A) {
    double m = 0.0;
    for (const auto& r : A) m = std::max(m, std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]));
    return m;
}
}  // namespace

Vec3 solve3(const Mat3& A, const Vec3& b) {
    Mat3 R = inverse3(A);
    Vec3 x{};
    for (int i = 0; i < 3; ++i) x[i] = R[i][0] * b[0] + R[i][1] * b[1] + R[i][2] * b[2];
    return x;
}

double cond_inf(const Mat3& A) { return norm_inf(A) * norm_inf(inverse3(A)); }

CVec modulation_z(const CVec& w, const Grid1D& g, double c, double a, double theta, Side side) {
    CVec z = shift_phase(w, g, a, theta);
    CVec phi = dark_profile(g, resolved_params(c, side));
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= phi[i];
    return z;
}

Vec3 ortho_residual(const CVec& w, const Grid1D& g, double c, double a, double theta, Side side) {
    auto f = profile_fields(g, resolved_params(c, side));
    CVec z = shift_phase(w, g, a, theta);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= f.phi[i];
    return project(weights(f), f.q, z, g);
}

Mat3 fd_jacobian(const CVec& w, const Grid1D& g, double c, double a, double theta, Side side,
                 double step) {
    Vec3 F0 = ortho_residual(w, g, c, a, theta, side);
    Vec3 Fa = ortho_residual(w, g, c, a + step, theta, side);
    Vec3 Fc = ortho_residual(w, g, c + step, a, theta, side);
    Vec3 Ft = ortho_residual(w, g, c, a, theta + step, side);
    Mat3 J;
    for (int i = 0; i < 3; ++i) {
        J[i][0] = (Fa[i] - F0[i]) / step;
        J[i][1] = (Fc[i] - F0[i]) / step;
        J[i][2] = (Ft[i] - F0[i]) / step;
    }
    return J;
}

ModulationState fit(const CVec& w, const Grid1D& g, const ModulationState& guess, const FitOptions& opt) {
    auto norm = [](const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };
    auto fail = [](const std::string& why) { throw Error(Errc::NoConvergence, why); };
    if (std::abs(guess.c) > opt.speed_cap) fail("initial speed beyond speed_cap");

    double c = guess.c, a = guess.a, th = guess.theta;
    Vec3 F = ortho_residual(w, g, c, a, th, opt.side);
    double r = norm(F);
    for (int it = 0; it <= opt.max_iter; ++it) {
        if (!std::isfinite(r)) fail("non-finite residual");
        if (r <= opt.newton_tol) {
            ModulationState s{c, a, th, r, it};
            return s;
        }
        if (it == opt.max_iter) break;
        // Jacobian in (a, c, theta), reusing F as the base point
        const double h = opt.fd_step;
        Vec3 Fa = ortho_residual(w, g, c, a + h, th, opt.side);
        Vec3 Fc = ortho_residual(w, g, c + h, a, th, opt.side);
        Vec3 Ft = ortho_residual(w, g, c, a, th + h, opt.side);
        Mat3 J;
        for (int i = 0; i < 3; ++i) {
            J[i][0] = (Fa[i] - F[i]) / h;
            J[i][1] = (Fc[i] - F[i]) / h;
            J[i][2] = (Ft[i] - F[i]) / h;
        }
        Vec3 d;
        try {
            if (cond_inf(J) > 1e12) fail("singular Jacobian");
            d = solve3(J, {-F[0], -F[1], -F[2]});
        } catch (const Error& e) {
            if (e.code() == Errc::SingularModulationMatrix) fail("singular Jacobian");
            throw;
        }
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
            double cn = c + t * d[1], an = a + t * d[0], tn = th + t * d[2];
            if (std::abs(cn) > opt.speed_cap) continue;
            Vec3 Fn = ortho_residual(w, g, cn, an, tn, opt.side);
            double rn = norm(Fn);
            if (rn < r) {
                c = cn;
                a = an;
                th = tn;
                F = Fn;
                r = rn;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (r <= 10.0 * opt.newton_tol) return ModulationState{c, a, th, r, it};
            fail("line search failed at residual " + std::to_string(r));
        }
    }
    fail("iteration cap reached, residual " + std::to_string(r));
    return {};
}

namespace {
struct Assembly {
    ProfileFields f, d;  // fields and their c-derivatives
    std::array<CVec, 3> W, dW;
};

Assembly assemble(double c, const Grid1D& g, Side side) {
    Assembly A;
    DarkParams p = resolved_params(c, side);
    A.f = profile_fields(g, p);
    A.d = profile_c_derivative(g, p);
    A.W = weights(A.f);
    for (auto& w : A.dW) w.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double R = A.f.phi[i].real(), dR = A.d.phi[i].real();
        A.dW[0][i] = A.d.eta[i];
        A.dW[1][i] = I * A.d.eta[i];
        A.dW[2][i] = I * (dR * A.f.eta[i] + R * A.d.eta[i]);
    }
    return A;
}

ModMatrix matrix_from(const Assembly& A, const CVec& z, const Grid1D& g) {
    ModMatrix M{};
    set_col(M.m, 0, project(A.W, A.f.q, A.f.dphi, g));
    Vec3 mc = project(A.W, A.f.q, A.d.phi, g);
    set_col(M.m, 1, {-mc[0], -mc[1], -mc[2]});
    set_col(M.m, 2, project(A.W, A.f.q, scaled(A.f.phi, -I), g));

    CVec dz = differentiate(z, g, 1);
    set_col(M.n, 0, project(A.W, A.f.q, dz, g));
    Vec3 n1 = project(A.dW, A.f.q, z, g);
    Vec3 n2 = project(A.W, A.d.q, z, g);
    set_col(M.n, 1, {n1[0] + n2[0], n1[1] + n2[1], n1[2] + n2[2]});
    set_col(M.n, 2, project(A.W, A.f.q, scaled(z, -I), g));

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M.M[i][j] = M.m[i][j] + M.n[i][j];
    return M;
}

DriverTriple driver_from(const Assembly& A, double c, const CVec& z, const Grid1D& g) {
    CVec d2z = differentiate(z, g, 2);
    CVec iZ(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const cplx phi = A.f.phi[i];
        const double a = std::norm(phi);
        const double rho = 2.0 * (phi * std::conj(z[i])).real() + std::norm(z[i]);
        cplx Z = d2z[i] + I * c * A.f.dphi[i] + A.f.eta[i] * z[i] - (rho * rho + 2.0 * a * rho) * (phi + z[i]);
        iZ[i] = I * Z;
    }
    Vec3 b = project(A.W, A.f.q, iZ, g);
    return DriverTriple{{-b[0], -b[1], -b[2]}};
}
}  // namespace

ModMatrix modulation_matrix(double c, const CVec& z, const Grid1D& g, Side side) {
    return matrix_from(assemble(c, g, side), z, g);
}

DriverTriple driver(double c, const CVec& z, const Grid1D& g, Side side) {
    return driver_from(assemble(c, g, side), c, z, g);
}

Rates rates(double c, const CVec& z, const Grid1D& g, Side side) {
    Assembly A = assemble(c, g, side);
    ModMatrix M = matrix_from(A, z, g);
    DriverTriple B = driver_from(A, c, z, g);
    double k;
    try {
        k = cond_inf(M.M);
    } catch (const Error&) {
        throw Error(Errc::SingularModulationMatrix, "M(c,z) singular");
    }
    if (!(k <= 1e6)) throw Error(Errc::SingularModulationMatrix, "condition number " + std::to_string(k));
    Vec3 x = solve3(M.M, B.B);
    return {x[0], x[1], x[2]};
}

OriginOracle jacobian_origin_oracle(const Grid1D& g, Side side) {
    Assembly A = assemble(0.0, g, side);
    OriginOracle o{};
    o.M = matrix_from(A, CVec(g.size()), g);
    o.det = det3(o.M.M);
    o.BB = o.M.m[0][0];
    o.AA = o.M.m[1][1];
    o.DD = o.M.m[0][2];
    o.CC = o.M.m[2][0];
    o.EE = o.M.m[2][2];
    return o;
}

}  // namespace gpq
