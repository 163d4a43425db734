#ifndef ACOPORO_ORACLE_HPP
#define ACOPORO_ORACLE_HPP

// Slow independent references. The Laplace-domain field at real s is the
// inverse Fourier integral over real slownesses (qx, qy) of the plane-wave
// solution; on the real axis every exponent has a positive real part, so the
// integrand is smooth and decays exponentially and no contour deformation is
// involved. Also: Laplace transforms of sampled traces, and brute-force
// minimization of the two-segment travel time.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include <acoporo/cagniard.hpp>
#include <acoporo/coefficients.hpp>
#include <acoporo/errors.hpp>
#include <acoporo/green.hpp>
#include <acoporo/media.hpp>

namespace acoporo
{

enum class OracleChannel {
    IncidentPressure,
    IncidentUx,
    IncidentUz,
    ReflectedXi,
    ReflectedUx,
    ReflectedUz,
    PfUx,
    PfUz,
    PsUx,
    PsUz,
    SUx,
    SUz,
};

inline const char *channel_name(OracleChannel c)
{
    switch (c) {
    case OracleChannel::IncidentPressure:
        return "p_inc";
    case OracleChannel::IncidentUx:
        return "u_inc_x";
    case OracleChannel::IncidentUz:
        return "u_inc_z";
    case OracleChannel::ReflectedXi:
        return "xi_ref";
    case OracleChannel::ReflectedUx:
        return "u_ref_x";
    case OracleChannel::ReflectedUz:
        return "u_ref_z";
    case OracleChannel::PfUx:
        return "u_pf_x";
    case OracleChannel::PfUz:
        return "u_pf_z";
    case OracleChannel::PsUx:
        return "u_ps_x";
    case OracleChannel::PsUz:
        return "u_ps_z";
    case OracleChannel::SUx:
        return "u_s_x";
    case OracleChannel::SUz:
        return "u_s_z";
    }
    return "?";
}

inline bool is_incident(OracleChannel c) { return c <= OracleChannel::IncidentUz; }
inline bool is_reflected(OracleChannel c) { return c >= OracleChannel::ReflectedXi && c <= OracleChannel::ReflectedUz; }

struct LaplaceProbe {
    double s = 20.0;
    Receiver receiver;
    double Q = 0.0;    // integration half-width; 0 selects it from the decay rate
    int panels = 8;    // starting number of Gauss panels per axis
    int max_panels = 128;
};

/// Integrand of the inverse Fourier integral (before taking the real part).
inline cplx laplace_integrand(const Media &md, double h, const Receiver &rc, double s, OracleChannel ch, double qx,
                              double qy, const CoefficientFn &coef = {})
{
    const double x = rc.offset();
    const double z = rc.z;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double rho = md.acoustic.rho_plus;
    const double v = md.acoustic.v_plus;
    const cplx iq(0.0, qx);
    const double kp = std::sqrt(1.0 / (v * v) + qx * qx + qy * qy);
    auto coefficients = [&] {
        return coef ? coef(qx, qy) : solve_coefficients(md, qx, qy);
    };
    if (is_incident(ch)) {
        const cplx e = std::exp(-s * (std::abs(z - h) * kp + iq * x));
        switch (ch) {
        case OracleChannel::IncidentPressure:
            return s / (8.0 * pi2 * v * v) * e / kp;
        case OracleChannel::IncidentUx:
            return 1.0 / (8.0 * pi2 * rho * v * v) * iq * e / kp;
        default:
            return (z > h ? 1.0 : -1.0) / (8.0 * pi2 * rho * v * v) * e;
        }
    }
    const InterfaceCoefficients c = coefficients();
    if (is_reflected(ch)) {
        const cplx e = std::exp(-s * ((z + h) * kp + iq * x));
        switch (ch) {
        case OracleChannel::ReflectedXi:
            return c.r * e / (4.0 * pi2);
        case OracleChannel::ReflectedUx:
            return iq * c.r * e / (4.0 * pi2 * rho);
        default:
            return kp * c.r * e / (4.0 * pi2 * rho);
        }
    }
    const auto &P = md.poro.P;
    auto transmitted = [&](double vb) { return std::exp(-s * (h * kp - z * kappa(vb, qx, qy) + iq * x)); };
    switch (ch) {
    case OracleChannel::PfUx:
        return -P.m11 * iq * c.t_pf * transmitted(md.poro.v_pf) / (4.0 * pi2);
    case OracleChannel::PfUz:
        return P.m11 * kappa(md.poro.v_pf, qx, qy) * c.t_pf * transmitted(md.poro.v_pf) / (4.0 * pi2);
    case OracleChannel::PsUx:
        return -P.m12 * iq * c.t_ps * transmitted(md.poro.v_ps) / (4.0 * pi2);
    case OracleChannel::PsUz:
        return P.m12 * kappa(md.poro.v_ps, qx, qy) * c.t_ps * transmitted(md.poro.v_ps) / (4.0 * pi2);
    case OracleChannel::SUx:
        return -iq * kappa(md.poro.v_s, qx, qy) * c.t_s * transmitted(md.poro.v_s) / (4.0 * pi2);
    default:
        return (qx * qx + qy * qy) * c.t_s * transmitted(md.poro.v_s) / (4.0 * pi2);
    }
}

/// Decay rate Re(phase) of the channel's exponent along the real qx axis.
inline double oracle_phase(const Media &md, double h, const Receiver &rc, OracleChannel ch, double q)
{
    const double z = rc.z;
    const double kp = std::sqrt(1.0 / (md.acoustic.v_plus * md.acoustic.v_plus) + q * q);
    if (is_incident(ch)) {
        return std::abs(z - h) * kp;
    }
    if (is_reflected(ch)) {
        return (z + h) * kp;
    }
    double vb = md.poro.v_s;
    if (ch == OracleChannel::PfUx || ch == OracleChannel::PfUz) {
        vb = md.poro.v_pf;
    } else if (ch == OracleChannel::PsUx || ch == OracleChannel::PsUz) {
        vb = md.poro.v_ps;
    }
    return h * kp - z * std::sqrt(1.0 / (vb * vb) + q * q);
}

/// Half-width at which the exponential factor has dropped by e^-36 relative to q = 0.
inline double oracle_half_width(const Media &md, double h, const Receiver &rc, double s, OracleChannel ch)
{
    const double p0 = oracle_phase(md, h, rc, ch, 0.0);
    double hi = 1e-4;
    while (s * (oracle_phase(md, h, rc, ch, hi) - p0) < 36.0) {
        hi *= 2.0;
    }
    double lo = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (s * (oracle_phase(md, h, rc, ch, mid) - p0) < 36.0 ? lo : hi) = mid;
    }
    return hi;
}

namespace detail
{

/// 4 * int_0^Q int_0^Q Re F dqx dqy with `panels` 20-point Gauss panels per axis.
/// The real part of F is even in both qx and qy.
template <class F> double gauss_square(F &&f, double Q, int panels)
{
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto &xs = rule::abscissa();
    const auto &ws = rule::weights();
    std::vector<double> nodes, weights;
    const double w = Q / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = (p + 0.5) * w;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            if (xs[k] == 0.0) {
                nodes.push_back(c);
                weights.push_back(0.5 * w * ws[k]);
                continue;
            }
            nodes.push_back(c + 0.5 * w * xs[k]);
            weights.push_back(0.5 * w * ws[k]);
            nodes.push_back(c - 0.5 * w * xs[k]);
            weights.push_back(0.5 * w * ws[k]);
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            row += weights[j] * f(nodes[i], nodes[j]).real();
        }
        sum += weights[i] * row;
    }
    return 4.0 * sum;
}

} // namespace detail

/// Laplace-domain value of a channel at y = 0, from real-axis integration.
/// Panels are doubled until two successive results agree to 1e-9; NotConverged
/// when the last doubling still changes the value by more than 1e-4.
inline double laplace_reference(const LaplaceProbe &probe, const Media &md, double h, OracleChannel ch,
                                const CoefficientFn &coef = {})
{
    if (!(probe.s > 0.0)) {
        throw NotConverged("Laplace variable must be positive");
    }
    const double Q = probe.Q > 0.0 ? probe.Q : oracle_half_width(md, h, probe.receiver, probe.s, ch);
    auto f = [&](double qx, double qy) {
        return laplace_integrand(md, h, probe.receiver, probe.s, ch, qx, qy, coef);
    };
    int panels = std::max(1, probe.panels);
    double prev = detail::gauss_square(f, Q, panels);
    double change = INFINITY;
    while (panels * 2 <= probe.max_panels) {
        panels *= 2;
        const double cur = detail::gauss_square(f, Q, panels);
        change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
        prev = cur;
        if (change <= 1e-9) {
            return cur;
        }
    }
    if (change > 1e-4) {
        std::ostringstream os;
        os << "Laplace reference for " << channel_name(ch) << " at s=" << probe.s
           << " not converged (last relative change " << change << ")";
        throw NotConverged(os.str());
    }
    return prev;
}

/// Midpoint int_0^T g(t) e^{-st} dt of samples g_i taken at (i + 1/2) dt.
inline double laplace_of_trace(const std::vector<double> &g, double dt, double s)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = (i + 0.5) * dt;
        sum += g[i] * std::exp(-s * t);
    }
    return sum * dt;
}

/// Quadrature nodes in time, aligned on breakpoints.
struct TimeQuadrature {
    std::vector<double> t;
    std::vector<double> w;
};

/// Midpoint rule on each [b_k, b_{k+1}] after the map t = a + (b - a)(1 - cos theta)/2,
/// which absorbs inverse square-root behaviour at the breakpoints.
inline TimeQuadrature breakpoint_quadrature(std::vector<double> breaks, int n_per_segment)
{
    std::sort(breaks.begin(), breaks.end());
    TimeQuadrature out;
    const double h = std::numbers::pi / n_per_segment;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k];
        const double b = breaks[k + 1];
        if (!(b > a)) {
            continue;
        }
        for (int j = 0; j < n_per_segment; ++j) {
            const double th = (j + 0.5) * h;
            out.t.push_back(a + 0.5 * (b - a) * (1.0 - std::cos(th)));
            out.w.push_back(0.5 * (b - a) * std::sin(th) * h);
        }
    }
    return out;
}

inline double laplace_of_samples(const TimeQuadrature &tq, const std::vector<double> &g, double s)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        sum += tq.w[i] * g[i] * std::exp(-s * tq.t[i]);
    }
    return sum;
}

/// Breakpoints for the Laplace transform of one wave: its arrival times, then
/// a tail long enough for exp(-s_min * length) to be negligible.
inline std::vector<double> laplace_breaks(const ArrivalTimes &a, double s_min)
{
    std::vector<double> b;
    if (a.head_exists) {
        b = {a.t_h1, a.t0, a.t_h2};
    } else {
        b = {a.t0};
    }
    const double tail = 36.0 / s_min;
    const double last = b.back();
    for (double f : {0.02, 0.08, 0.25, 1.0}) {
        b.push_back(last + f * tail);
    }
    return b;
}

/// Minimum over xi in [0, x] of the two-segment travel time: uniform grid,
/// then golden-section refinement around the best node.
inline double grid_min_arrival(double q, const Geometry &geom, const WaveBranch &branch, int n)
{
    const Contour c(geom, branch, 0.0);
    const double x = geom.x;
    if (x <= 0.0) {
        return c.snell_time(0.0, q);
    }
    n = std::max(n, 2);
    int best = 0;
    double tmin = INFINITY;
    for (int i = 0; i <= n; ++i) {
        const double tt = c.snell_time(x * i / n, q);
        if (tt < tmin) {
            tmin = tt;
            best = i;
        }
    }
    double a = x * std::max(0, best - 1) / n;
    double b = x * std::min(n, best + 1) / n;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - g * (b - a);
    double c2 = a + g * (b - a);
    double f1 = c.snell_time(c1, q);
    double f2 = c.snell_time(c2, q);
    while (b - a > 1e-13 * x) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - g * (b - a);
            f1 = c.snell_time(c1, q);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + g * (b - a);
            f2 = c.snell_time(c2, q);
        }
    }
    return std::min({tmin, f1, f2});
}

} // namespace acoporo

#endif
