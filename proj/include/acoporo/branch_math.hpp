#ifndef ACOPORO_BRANCH_MATH_HPP
#define ACOPORO_BRANCH_MATH_HPP

#include <cmath>
#include <complex>

namespace acoporo
{

using cplx = std::complex<double>;

/// Square root with positive real part, cut along the negative real axis.
/// Points on the cut (|Im q| < 1e-300) map to i*sqrt(-q), whatever the sign of
/// the imaginary zero.
inline cplx branch_sqrt(cplx q)
{
    if (std::abs(q.imag()) < 1e-300 && q.real() < 0.0) {
        return {0.0, std::sqrt(-q.real())};
    }
    return std::sqrt(q);
}

/// Apparent velocity of a 2D slice with transverse slowness q.
inline double fictitious_velocity(double v, double q)
{
    return v / std::sqrt(1.0 + v * v * q * q);
}

/// Vertical slowness sqrt(1/v^2 + qx^2 + qy^2).
inline cplx kappa(double v, cplx qx, double qy)
{
    return branch_sqrt(1.0 / (v * v) + qx * qx + qy * qy);
}

} // namespace acoporo

#endif
