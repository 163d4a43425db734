#ifndef ACOPORO_COEFFICIENTS_HPP
#define ACOPORO_COEFFICIENTS_HPP

// Reflection / transmission coefficients of the fluid-poroelastic interface at
// one slowness point, from the 4x4 continuity system (normal displacement,
// pressure, two traction conditions). Unknown order: R, T_pf, T_ps, T_s.

#include <array>
#include <cmath>
#include <sstream>

#include <acoporo/branch_math.hpp>
#include <acoporo/errors.hpp>
#include <acoporo/media.hpp>

namespace acoporo
{

using Matrix4c = std::array<std::array<cplx, 4>, 4>;
using Vector4c = std::array<cplx, 4>;

struct InterfaceSystem {
    Matrix4c A;
    Vector4c b;
};

struct InterfaceCoefficients {
    cplx r, t_pf, t_ps, t_s;

    [[nodiscard]] Vector4c as_array() const { return {r, t_pf, t_ps, t_s}; }
};

inline double norm_inf(const Matrix4c &A)
{
    double n = 0.0;
    for (const auto &row : A) {
        double s = 0.0;
        for (const auto &v : row) {
            s += std::abs(v);
        }
        n = std::max(n, s);
    }
    return n;
}

inline InterfaceSystem assemble_system(const AcousticMedium &ac, const PoroelasticDerived &po, cplx qx, double qy)
{
    const cplx k_plus = kappa(ac.v_plus, qx, qy);
    const cplx k_pf = kappa(po.v_pf, qx, qy);
    const cplx k_ps = kappa(po.v_ps, qx, qy);
    const cplx k_s = kappa(po.v_s, qx, qy);
    const cplx Q = qx * qx + qy * qy;
    const Matrix2 &P = po.P;
    const double vpf2 = po.v_pf * po.v_pf;
    const double vps2 = po.v_ps * po.v_ps;
    const double lm = po.lambda + po.m * po.beta * po.beta;
    const double mb = po.m * po.beta;

    InterfaceSystem sys;
    auto &A = sys.A;
    A[0] = {-k_plus / ac.rho_plus, (P.m11 + P.m21) * k_pf, (P.m12 + P.m22) * k_ps,
            (1.0 - po.rho_f / po.rho_w) * Q};
    A[1] = {cplx(1.0), po.m * (po.beta * P.m11 + P.m21) / vpf2, po.m * (po.beta * P.m12 + P.m22) / vps2,
            cplx(0.0)};
    A[2] = {cplx(0.0), 2.0 * P.m11 * k_pf, 2.0 * P.m12 * k_ps, k_s * k_s + Q};
    A[3] = {cplx(1.0), (lm * P.m11 + mb * P.m21) / vpf2 + 2.0 * po.mu * k_pf * k_pf * P.m11,
            (lm * P.m12 + mb * P.m22) / vps2 + 2.0 * po.mu * k_ps * k_ps * P.m12, 2.0 * po.mu * Q * k_s};

    const cplx c = -1.0 / (2.0 * k_plus * ac.v_plus * ac.v_plus);
    sys.b = {c * k_plus / ac.rho_plus, c, cplx(0.0), c};
    return sys;
}

/// Gaussian elimination with partial pivoting. Rows are equilibrated first
/// (the four continuity conditions live on very different scales), and the
/// pivot test is made on the equilibrated matrix.
inline Vector4c solve4(Matrix4c A, Vector4c b, double pivot_tol = 1e-14)
{
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) {
            s = std::max(s, std::abs(A[i][j]));
        }
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw SingularSystem("zero or non-finite row in interface system");
        }
        for (int j = 0; j < 4; ++j) {
            A[i][j] /= s;
        }
        b[i] /= s;
    }
    const double tol = pivot_tol * norm_inf(A);
    for (int k = 0; k < 4; ++k) {
        int p = k;
        for (int i = k + 1; i < 4; ++i) {
            if (std::abs(A[i][k]) > std::abs(A[p][k])) {
                p = i;
            }
        }
        if (!(std::abs(A[p][k]) >= tol)) {
            throw SingularSystem("pivot below threshold");
        }
        std::swap(A[k], A[p]);
        std::swap(b[k], b[p]);
        for (int i = k + 1; i < 4; ++i) {
            const cplx f = A[i][k] / A[k][k];
            for (int j = k; j < 4; ++j) {
                A[i][j] -= f * A[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    Vector4c x;
    for (int i = 3; i >= 0; --i) {
        cplx s = b[i];
        for (int j = i + 1; j < 4; ++j) {
            s -= A[i][j] * x[j];
        }
        x[i] = s / A[i][i];
    }
    return x;
}

/// ||A x - b||_inf / max(||b||_inf, ||A||_inf ||x||_inf)
inline double relative_residual(const InterfaceSystem &sys, const Vector4c &x)
{
    double r = 0.0, nb = 0.0, nx = 0.0;
    for (int i = 0; i < 4; ++i) {
        cplx s = -sys.b[i];
        for (int j = 0; j < 4; ++j) {
            s += sys.A[i][j] * x[j];
        }
        r = std::max(r, std::abs(s));
        nb = std::max(nb, std::abs(sys.b[i]));
        nx = std::max(nx, std::abs(x[i]));
    }
    return r / std::max(nb, norm_inf(sys.A) * nx);
}

inline InterfaceCoefficients solve_coefficients(const AcousticMedium &ac, const PoroelasticDerived &po, cplx qx,
                                                double qy)
{
    const InterfaceSystem sys = assemble_system(ac, po, qx, qy);
    Vector4c x;
    try {
        x = solve4(sys.A, sys.b);
    } catch (const SingularSystem &e) {
        std::ostringstream os;
        os.precision(17);
        os << e.what() << " at qx=" << qx << ", qy=" << qy;
        throw SingularSystem(os.str());
    }
    return {x[0], x[1], x[2], x[3]};
}

inline InterfaceCoefficients solve_coefficients(const Media &md, cplx qx, double qy)
{
    return solve_coefficients(md.acoustic, md.poro, qx, qy);
}

} // namespace acoporo

#endif
