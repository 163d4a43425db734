#ifndef ACOPORO_QUADRATURE_HPP
#define ACOPORO_QUADRATURE_HPP

// Midpoint rules for the slowness integrals. The plain rule is applied to q
// directly; the substituted variants move an inverse square-root endpoint
// singularity into a smooth integrand before applying the same midpoint rule.

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <type_traits>

#include <acoporo/errors.hpp>

namespace acoporo
{

struct QuadratureConfig {
    int n = 2000;
    bool sin_substitution = false;
};

/// Where the integrand of a given interval is singular.
enum class EndpointShape {
    Smooth,
    UpperInverseSqrt, // 1/sqrt(b - q); substitution q = a + (b - a) sin(theta)
    BothEnds,         // singular at both ends; substitution q = a + (b - a)(1 - cos(theta))/2
};

namespace detail
{

template <class T> struct is_std_array : std::false_type {
};
template <class V, std::size_t N> struct is_std_array<std::array<V, N>> : std::true_type {
};

template <class T> void axpy(T &acc, double w, const T &v)
{
    if constexpr (is_std_array<T>::value) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            acc[i] += w * v[i];
        }
    } else {
        acc += w * v;
    }
}

template <class T> bool all_finite(const T &v)
{
    if constexpr (is_std_array<T>::value) {
        for (const auto &e : v) {
            if (!std::isfinite(e)) {
                return false;
            }
        }
        return true;
    } else {
        return std::isfinite(v);
    }
}

template <class T> T zero()
{
    T z{};
    if constexpr (!is_std_array<T>::value) {
        z = 0.0;
    }
    return z;
}

[[noreturn]] inline void non_finite(double q)
{
    std::ostringstream os;
    os.precision(17);
    os << "non-finite integrand at q=" << q;
    throw NonFiniteIntegrand(os.str());
}

} // namespace detail

/// Plain midpoint rule with n subintervals.
template <class F> auto midpoint(F &&f, double a, double b, int n)
{
    using T = std::decay_t<decltype(f(a))>;
    T acc = detail::zero<T>();
    const double h = (b - a) / n;
    for (int j = 0; j < n; ++j) {
        const double q = a + (j + 0.5) * h;
        const T v = f(q);
        if (!detail::all_finite(v)) {
            detail::non_finite(q);
        }
        detail::axpy(acc, h, v);
    }
    return acc;
}

/// Midpoint rule after the substitution selected by `shape` (when enabled in
/// the config); the plain rule otherwise.
template <class F> auto integrate(F &&f, double a, double b, const QuadratureConfig &cfg, EndpointShape shape)
{
    using T = std::decay_t<decltype(f(a))>;
    if (!cfg.sin_substitution || shape == EndpointShape::Smooth) {
        return midpoint(f, a, b, cfg.n);
    }
    T acc = detail::zero<T>();
    const double w = b - a;
    if (shape == EndpointShape::UpperInverseSqrt) {
        const double h = 0.5 * std::numbers::pi / cfg.n;
        for (int j = 0; j < cfg.n; ++j) {
            const double th = (j + 0.5) * h;
            const double q = a + w * std::sin(th);
            const T v = f(q);
            if (!detail::all_finite(v)) {
                detail::non_finite(q);
            }
            detail::axpy(acc, h * w * std::cos(th), v);
        }
        return acc;
    }
    const double h = std::numbers::pi / cfg.n;
    for (int j = 0; j < cfg.n; ++j) {
        const double th = (j + 0.5) * h;
        const double q = a + 0.5 * w * (1.0 - std::cos(th));
        const T v = f(q);
        if (!detail::all_finite(v)) {
            detail::non_finite(q);
        }
        detail::axpy(acc, 0.5 * h * w * std::sin(th), v);
    }
    return acc;
}

} // namespace acoporo

#endif
