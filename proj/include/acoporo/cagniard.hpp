#ifndef ACOPORO_CAGNIARD_HPP
#define ACOPORO_CAGNIARD_HPP

// Cagniard contours and arrival times.
//
// For a slice with transverse slowness q every wave is described by the phase
//
//     phi(g; q) = d_top * kappa(v_top, g, q) + d_bot * kappa(v_bot, g, q) + i g x
//
// with (d_top, d_bot) = (z + h, 0) for the reflected wave (image source) and
// (h, -z) for the transmitted ones. The volume contour gamma(t, q) is the root
// of phi = t with positive real part, the head contour upsilon(t, q) = -i sigma
// is the root on the imaginary axis between the branch point of the fastest
// medium and the saddle -i sigma0(q). Both contours lie in Im g < 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>

#include <unsupported/Eigen/Polynomials>

#include <acoporo/branch_math.hpp>
#include <acoporo/errors.hpp>
#include <acoporo/media.hpp>

namespace acoporo
{

enum class BranchTag { ReflectedAcoustic, TransmittedPf, TransmittedPs, TransmittedS };

inline const char *branch_name(BranchTag tag)
{
    switch (tag) {
    case BranchTag::ReflectedAcoustic:
        return "reflected";
    case BranchTag::TransmittedPf:
        return "Pf";
    case BranchTag::TransmittedPs:
        return "Ps";
    case BranchTag::TransmittedS:
        return "S";
    }
    return "?";
}

struct WaveBranch {
    BranchTag tag = BranchTag::ReflectedAcoustic;
    double v_top = 0.0;    // acoustic velocity
    double v_bottom = 0.0; // equals v_top for the reflected wave

    [[nodiscard]] bool transmitted() const { return tag != BranchTag::ReflectedAcoustic; }
};

inline WaveBranch make_branch(const Media &md, BranchTag tag)
{
    const double vp = md.acoustic.v_plus;
    switch (tag) {
    case BranchTag::ReflectedAcoustic:
        return {tag, vp, vp};
    case BranchTag::TransmittedPf:
        return {tag, vp, md.poro.v_pf};
    case BranchTag::TransmittedPs:
        return {tag, vp, md.poro.v_ps};
    case BranchTag::TransmittedS:
        return {tag, vp, md.poro.v_s};
    }
    return {};
}

struct Geometry {
    double h = 0.0; // source height above the interface
    double x = 0.0; // horizontal offset, >= 0
    double z = 0.0; // receiver height (negative below the interface)

    /// Image-source distance used by the reflected wave.
    [[nodiscard]] double r() const { return std::hypot(x, z + h); }
    /// Direct source-receiver distance.
    [[nodiscard]] double direct_distance() const { return std::hypot(x, z - h); }
};

struct ArrivalTimes {
    double t0 = 0.0;
    double t_h1 = 0.0;
    double t_h2 = 0.0;
    double q_max = 0.0;
    bool head_exists = false;

    /// Earliest time at which the wave is nonzero.
    [[nodiscard]] double first() const { return head_exists ? t_h1 : t0; }
};

struct ContourPoint {
    cplx value;
    cplx dt; // d value / dt
    double residual = 0.0;
};

/// Stationary point of the travel time in one q slice.
struct Saddle {
    double xi = 0.0;    // interface crossing point
    double sigma = 0.0; // saddle sits at g = -i sigma
    double time = 0.0;  // fictitious arrival time
    double dtdq = 0.0;  // derivative of the fictitious arrival time wrt q
    double curvature = 0.0; // second derivative of phi at the saddle
};

namespace detail
{

inline std::string where(const char *what, BranchTag tag, double t, double q)
{
    std::ostringstream os;
    os.precision(17);
    os << what << " (branch " << branch_name(tag) << ", t=" << t << ", q=" << q << ")";
    return os.str();
}

} // namespace detail

class Contour
{
public:
    Contour(const Geometry &geom, const WaveBranch &branch, double v_max)
        : geom_(geom), branch_(branch), v_max_(v_max)
    {
        if (branch.transmitted()) {
            d_top_ = geom.h;
            d_bot_ = -geom.z;
        } else {
            d_top_ = geom.z + geom.h;
            d_bot_ = 0.0;
        }
        const double s_max2 = v_max > 0.0 ? 1.0 / (v_max * v_max) : 0.0;
        c1_ = std::sqrt(std::max(0.0, 1.0 / (branch.v_top * branch.v_top) - s_max2));
        c2_ = std::sqrt(std::max(0.0, 1.0 / (branch.v_bottom * branch.v_bottom) - s_max2));
        arrivals_ = compute_arrivals();
    }

    [[nodiscard]] const Geometry &geometry() const { return geom_; }
    [[nodiscard]] const WaveBranch &branch() const { return branch_; }
    [[nodiscard]] double v_max() const { return v_max_; }
    [[nodiscard]] double d_top() const { return d_top_; }
    [[nodiscard]] double d_bottom() const { return d_bot_; }
    [[nodiscard]] const ArrivalTimes &arrivals() const { return arrivals_; }

    /// Two-segment travel time through interface point xi at the fictitious
    /// velocities of slice q.
    [[nodiscard]] double snell_time(double xi, double q) const
    {
        const double st = std::sqrt(1.0 / sq(branch_.v_top) + q * q);
        const double sb = std::sqrt(1.0 / sq(branch_.v_bottom) + q * q);
        return std::hypot(xi, geom_.h) * st + std::hypot(geom_.x - xi, geom_.z) * sb;
    }

    [[nodiscard]] double fictitious_arrival(double q) const { return saddle(q).time; }

    [[nodiscard]] Saddle saddle(double q) const
    {
        const double st = std::sqrt(1.0 / sq(branch_.v_top) + q * q);
        const double sb = std::sqrt(1.0 / sq(branch_.v_bottom) + q * q);
        Saddle s;
        if (!branch_.transmitted()) {
            const double r = geom_.r();
            s.xi = geom_.x * geom_.h / (geom_.h + geom_.z);
            s.time = r * st;
            s.sigma = geom_.x * st / r;
            s.dtdq = r * q / st;
            s.curvature = r * r * r / (st * d_top_ * d_top_);
            return s;
        }
        s.xi = interface_point(st, sb);
        const double L1 = std::hypot(s.xi, geom_.h);
        const double L2 = std::hypot(geom_.x - s.xi, geom_.z);
        s.time = L1 * st + L2 * sb;
        s.sigma = s.xi * st / L1;
        s.dtdq = q * (L1 / st + L2 / sb);
        const double kt = std::sqrt(st * st - s.sigma * s.sigma);
        const double kb = std::sqrt(sb * sb - s.sigma * s.sigma);
        s.curvature = d_top_ * st * st / (kt * kt * kt) + (d_bot_ > 0.0 ? d_bot_ * sb * sb / (kb * kb * kb) : 0.0);
        return s;
    }

    /// Phase phi(g; q).
    [[nodiscard]] cplx phase(cplx g, double q) const
    {
        cplx p = cplx(0.0, 1.0) * g * geom_.x + d_top_ * kappa(branch_.v_top, g, q);
        if (d_bot_ != 0.0) {
            p += d_bot_ * kappa(branch_.v_bottom, g, q);
        }
        return p;
    }

    /// d phi / d g.
    [[nodiscard]] cplx phase_derivative(cplx g, double q) const
    {
        cplx d = cplx(0.0, geom_.x) + d_top_ * g / kappa(branch_.v_top, g, q);
        if (d_bot_ != 0.0) {
            d += d_bot_ * g / kappa(branch_.v_bottom, g, q);
        }
        return d;
    }

    /// Head-wave fictitious arrival time of slice q.
    [[nodiscard]] double head_time(double q) const
    {
        return d_top_ * c1_ + d_bot_ * c2_ + geom_.x * std::sqrt(1.0 / sq(v_max_) + q * q);
    }

    [[nodiscard]] double q0_of_t(double t) const
    {
        const double t0 = arrivals_.t0;
        if (!branch_.transmitted()) {
            const double r = geom_.r();
            return std::sqrt(std::abs(t * t / (r * r) - 1.0 / sq(branch_.v_top)));
        }
        if (t <= t0) {
            return 0.0;
        }
        double lo = 0.0;
        double hi = t / std::hypot(geom_.x, d_top_ + d_bot_);
        // Quadratic start from the curvature of t~0 at q = 0.
        const Saddle s0 = saddle(0.0);
        const double L1 = std::hypot(s0.xi, geom_.h);
        const double L2 = std::hypot(geom_.x - s0.xi, geom_.z);
        double q = std::min(std::sqrt(2.0 * (t - t0) / (L1 * branch_.v_top + L2 * branch_.v_bottom)), 0.5 * hi);
        const double tol = 1e-14 * t;
        for (int it = 0; it < 200; ++it) {
            const Saddle s = saddle(q);
            const double f = s.time - t;
            if (std::abs(f) <= tol) {
                return q;
            }
            if (f > 0.0) {
                hi = q;
            } else {
                lo = q;
            }
            double next = s.dtdq > 0.0 ? q - f / s.dtdq : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
            if (hi - lo <= 4e-16 * hi) {
                return next;
            }
            q = next;
        }
        const Saddle s = saddle(q);
        if (std::abs(s.time - t) <= 1e-9 * t) {
            return q;
        }
        throw ConvergenceFailure(detail::where("q0_of_t did not converge", branch_.tag, t, q));
    }

    [[nodiscard]] double q1_of_t(double t) const
    {
        if (!arrivals_.head_exists) {
            throw DomainError(detail::where("q1_of_t: no head wave", branch_.tag, t, 0.0));
        }
        const double a = (t - d_top_ * c1_ - d_bot_ * c2_) / geom_.x;
        const double s2 = 1.0 / sq(v_max_);
        const double rad = a * a - s2;
        if (rad < -1e-14 * s2 || a < 0.0) {
            throw DomainError(detail::where("q1_of_t: t before the head wave", branch_.tag, t, 0.0));
        }
        return std::sqrt(std::max(rad, 0.0));
    }

    /// Volume contour. Throws DomainError for t <= t~0(q).
    [[nodiscard]] ContourPoint gamma(double t, double q, std::optional<cplx> hint = std::nullopt) const
    {
        if (!branch_.transmitted()) {
            return reflected_gamma(t, q);
        }
        const Saddle s = saddle(q);
        if (!(t > s.time)) {
            throw DomainError(detail::where("gamma: t not after the fictitious arrival", branch_.tag, t, q));
        }
        const double tol = 1e-12 * (1.0 + t);
        const cplx saddle_guess = cplx(std::sqrt(2.0 * (t - s.time) / s.curvature), -s.sigma);
        const cplx far_guess = homogeneous_guess(t, s.time);
        const bool near = (t - s.time) < 0.05 * s.time;
        cplx guesses[3] = {near ? saddle_guess : far_guess, near ? far_guess : saddle_guess, hint.value_or(cplx())};
        const int n_guess = hint ? 3 : 2;
        for (int k = 0; k < n_guess; ++k) {
            if (auto p = newton(guesses[k], t, q, tol)) {
                return *p;
            }
        }
        // Continuation in t from just above the saddle.
        const double span = t - s.time;
        cplx g = cplx(std::sqrt(2.0 * 1e-6 * span / s.curvature), -s.sigma);
        for (int k = 0; k <= 60; ++k) {
            const double tk = s.time + span * std::pow(1e-6, 1.0 - k / 60.0);
            auto p = newton(g, tk, q, 1e-12 * (1.0 + tk));
            if (!p) {
                break;
            }
            g = p->value;
            if (k == 60) {
                return *p;
            }
        }
        throw ConvergenceFailure(detail::where("gamma: Newton failed", branch_.tag, t, q));
    }

    /// Whether (t, q) lies in the head-wave domain.
    [[nodiscard]] bool in_head_domain(double t, double q) const
    {
        if (!arrivals_.head_exists || q < 0.0 || q > arrivals_.q_max) {
            return false;
        }
        return t > head_time(q) && t < fictitious_arrival(q);
    }

    /// Head contour upsilon = -i sigma. Throws DomainError outside the head domain.
    [[nodiscard]] ContourPoint upsilon(double t, double q) const
    {
        if (!arrivals_.head_exists) {
            throw DomainError(detail::where("upsilon: no head wave", branch_.tag, t, q));
        }
        const Saddle s = saddle(q);
        const double th = head_time(q);
        const double slack = 1e-12 * t;
        if (!(t > th - slack && t < s.time + slack)) {
            throw DomainError(detail::where("upsilon: outside the head-wave domain", branch_.tag, t, q));
        }
        const double st = std::sqrt(1.0 / sq(branch_.v_top) + q * q);
        double sigma;
        if (!branch_.transmitted()) {
            const double r = geom_.r();
            sigma = geom_.x * t / (r * r) - (d_top_ / r) * std::sqrt(std::max(0.0, st * st - t * t / (r * r)));
        } else {
            sigma = head_sigma(t, q, s);
        }
        const cplx v(0.0, -sigma);
        ContourPoint p;
        p.value = v;
        p.dt = 1.0 / phase_derivative(v, q);
        p.residual = std::abs(phase(v, q) - t);
        return p;
    }

private:
    static double sq(double v) { return v * v; }

    ArrivalTimes compute_arrivals() const
    {
        ArrivalTimes a;
        const Saddle s0 = saddle(0.0);
        a.t0 = s0.time;
        const double x_min = 1e-9 * (geom_.h + std::abs(geom_.z));
        if (!(v_max_ > 0.0) || geom_.x < x_min) {
            return a;
        }
        const double s_max = 1.0 / v_max_;
        double denom = 0.0;
        if (d_top_ > 0.0) {
            denom += c1_ > 0.0 ? d_top_ / c1_ : INFINITY;
        }
        if (d_bot_ > 0.0) {
            denom += c2_ > 0.0 ? d_bot_ / c2_ : INFINITY;
        }
        const double sigma_star = geom_.x / denom;
        if (!(s0.sigma > s_max && sigma_star > s_max)) {
            return a;
        }
        a.head_exists = true;
        a.t_h1 = d_top_ * c1_ + d_bot_ * c2_ + geom_.x * s_max;
        a.t_h2 = d_top_ * c1_ + d_bot_ * c2_ + geom_.x * sigma_star;
        a.q_max = std::sqrt(sigma_star * sigma_star - s_max * s_max);
        return a;
    }

    /// Interface point of the stationary path, from the quartic obtained by
    /// squaring t'(xi) = 0, then polished on t'.
    double interface_point(double st, double sb) const
    {
        const double x = geom_.x;
        const double h = geom_.h;
        const double z = geom_.z;
        if (x <= 0.0) {
            return 0.0;
        }
        const double A = st * st;
        const double B = sb * sb;
        // Variable u = xi / x.
        Eigen::Matrix<double, 5, 1> c;
        c << -B * h * h, 2.0 * B * h * h, (A - B) * x * x + A * z * z - B * h * h, -2.0 * (A - B) * x * x,
            (A - B) * x * x;
        const double scale = c.cwiseAbs().maxCoeff();
        double u0 = -1.0;
        if (std::abs(c[4]) > 1e-12 * scale) {
            Eigen::PolynomialSolver<double, 4> solver;
            solver.compute(c);
            double best = INFINITY;
            for (const auto &root : solver.roots()) {
                const double u = root.real();
                if (std::abs(root.imag()) > 1e-6 * (1.0 + std::abs(u)) || u < -1e-9 || u > 1.0 + 1e-9) {
                    continue;
                }
                const double xi = std::clamp(u, 0.0, 1.0) * x;
                const double d = std::abs(snell_slope(xi, st, sb)) / (st + sb);
                if (d < best) {
                    best = d;
                    u0 = std::clamp(u, 0.0, 1.0);
                }
            }
            if (best > 1e-6) {
                u0 = -1.0;
            }
        }
        if (u0 < 0.0) {
            throw RootNotFound(detail::where("no admissible quartic root for the interface point", branch_.tag, 0.0,
                                             std::sqrt(std::max(0.0, A - 1.0 / sq(branch_.v_top)))));
        }
        return polish_interface_point(u0 * x, st, sb);
    }

    double snell_slope(double xi, double st, double sb) const
    {
        return xi * st / std::hypot(xi, geom_.h) - (geom_.x - xi) * sb / std::hypot(geom_.x - xi, geom_.z);
    }

    double polish_interface_point(double xi, double st, double sb) const
    {
        const double x = geom_.x;
        const double h2 = geom_.h * geom_.h;
        const double z2 = geom_.z * geom_.z;
        double lo = 0.0, hi = x;
        for (int it = 0; it < 100; ++it) {
            const double f = snell_slope(xi, st, sb);
            if (f > 0.0) {
                hi = xi;
            } else if (f < 0.0) {
                lo = xi;
            } else {
                return xi;
            }
            const double L1 = std::hypot(xi, geom_.h);
            const double L2 = std::hypot(x - xi, geom_.z);
            const double d2 = st * h2 / (L1 * L1 * L1) + sb * z2 / (L2 * L2 * L2);
            double next = xi - f / d2;
            if (!(next >= lo && next <= hi)) {
                next = 0.5 * (lo + hi);
            }
            if (std::abs(next - xi) <= 1e-15 * x) {
                return next;
            }
            xi = next;
        }
        return xi;
    }

    ContourPoint reflected_gamma(double t, double q) const
    {
        const double r = geom_.r();
        const double st = std::sqrt(1.0 / sq(branch_.v_top) + q * q);
        const double rad = t * t / (r * r) - st * st;
        if (!(rad > 0.0)) {
            throw DomainError(detail::where("gamma: t not after the fictitious arrival", branch_.tag, t, q));
        }
        const double S = std::sqrt(rad);
        ContourPoint p;
        p.value = cplx(d_top_ * S / r, -geom_.x * t / (r * r));
        // kappa(gamma) = (z+h) t / r^2 - i x S / r, so d gamma / dt = kappa / (r S).
        p.dt = cplx(d_top_ * t / (r * r), -geom_.x * S / r) / (r * S);
        p.residual = std::abs(phase(p.value, q) - t);
        return p;
    }

    cplx homogeneous_guess(double t, double t_fict) const
    {
        const double D = d_top_ + d_bot_;
        const double R2 = geom_.x * geom_.x + D * D;
        const double R = std::sqrt(R2);
        const double s_eff = t_fict / R;
        const double rad = std::max(0.0, t * t / R2 - s_eff * s_eff);
        return {D / R * std::sqrt(rad), -geom_.x * t / R2};
    }

    std::optional<ContourPoint> newton(cplx g, double t, double q, double tol) const
    {
        cplx f = phase(g, q) - t;
        for (int it = 0; it < 100; ++it) {
            if (std::abs(f) <= tol) {
                break;
            }
            const cplx d = phase_derivative(g, q);
            if (!(std::abs(d) > 0.0)) {
                return std::nullopt;
            }
            const cplx step = f / d;
            double lam = 1.0;
            cplx gn = g - step;
            cplx fn = phase(gn, q) - t;
            for (int k = 0; k < 50 && !(std::abs(fn) < std::abs(f)); ++k) {
                lam *= 0.5;
                gn = g - lam * step;
                fn = phase(gn, q) - t;
            }
            if (!(std::abs(fn) < std::abs(f))) {
                return std::nullopt;
            }
            g = gn;
            f = fn;
        }
        if (!(std::abs(f) <= tol)) {
            return std::nullopt;
        }
        if (g.real() < 0.0) {
            g = -std::conj(g);
        }
        if (g.imag() > 1e-12 * std::abs(g) + 1e-300 && geom_.x > 0.0) {
            return std::nullopt;
        }
        ContourPoint p;
        p.value = g;
        p.dt = 1.0 / phase_derivative(g, q);
        p.residual = std::abs(phase(g, q) - t);
        return p;
    }

    /// Root of phi(-i sigma) = t on (1/V_max(q), sigma0(q)), where phi is
    /// increasing and concave.
    double head_sigma(double t, double q, const Saddle &s) const
    {
        auto g = [&](double sigma) { return phase(cplx(0.0, -sigma), q).real(); };
        auto dg = [&](double sigma) {
            double d = geom_.x - d_top_ * sigma / std::sqrt(1.0 / sq(branch_.v_top) + q * q - sigma * sigma);
            if (d_bot_ != 0.0) {
                d -= d_bot_ * sigma / std::sqrt(1.0 / sq(branch_.v_bottom) + q * q - sigma * sigma);
            }
            return d;
        };
        double lo = std::sqrt(1.0 / sq(v_max_) + q * q);
        double hi = s.sigma;
        if (t >= s.time) {
            return hi;
        }
        if (t <= head_time(q)) {
            return lo;
        }
        // Start from the quadratic expansion at the saddle; Newton from the
        // left of the root is monotone for a concave increasing function.
        double sigma = std::max(lo, hi - std::sqrt(2.0 * (s.time - t) / s.curvature));
        const double tol = 1e-15 * t;
        for (int it = 0; it < 200; ++it) {
            const double f = g(sigma) - t;
            if (std::abs(f) <= tol) {
                return sigma;
            }
            if (f > 0.0) {
                hi = sigma;
            } else {
                lo = sigma;
            }
            const double d = dg(sigma);
            double next = d > 0.0 ? sigma - f / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) {
                next = 0.5 * (lo + hi);
            }
            if (hi - lo <= 1e-16 * hi) {
                return next;
            }
            sigma = next;
        }
        if (std::abs(g(sigma) - t) <= 1e-10 * (1.0 + t)) {
            return sigma;
        }
        throw ConvergenceFailure(detail::where("upsilon: root search failed", branch_.tag, t, q));
    }

    Geometry geom_;
    WaveBranch branch_;
    double v_max_;
    double d_top_ = 0.0;
    double d_bot_ = 0.0;
    double c1_ = 0.0;
    double c2_ = 0.0;
    ArrivalTimes arrivals_;
};

// Free-function forms.

inline double snell_time(double xi, double q, const Geometry &geom, const WaveBranch &branch)
{
    return Contour(geom, branch, 0.0).snell_time(xi, q);
}

inline double fictitious_arrival(double q, const Geometry &geom, const WaveBranch &branch)
{
    return Contour(geom, branch, 0.0).fictitious_arrival(q);
}

inline ArrivalTimes arrival_times(const Geometry &geom, const WaveBranch &branch, double v_max)
{
    return Contour(geom, branch, v_max).arrivals();
}

} // namespace acoporo

#endif
