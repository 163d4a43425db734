#ifndef ACOPORO_GREEN_HPP
#define ACOPORO_GREEN_HPP

// Time-domain Green functions at a receiver for a unit point source in the
// fluid. Each reflected or transmitted channel is
//
//     u(t) = (C / pi^2) * [ int_0^{q0(t)} Re(G(gamma) d_t gamma) dq
//                         + int_{head window} Re(conj(G(upsilon)) d_t upsilon) dq ]
//
// where G and C depend on the channel (see WaveEvaluator::kernel). The head
// contour runs along the right lip of the branch cut, whose values are the
// conjugates of the on-cut values returned by branch_sqrt.

#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <acoporo/branch_math.hpp>
#include <acoporo/cagniard.hpp>
#include <acoporo/coefficients.hpp>
#include <acoporo/errors.hpp>
#include <acoporo/media.hpp>
#include <acoporo/quadrature.hpp>

namespace acoporo
{

struct Receiver {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double offset() const { return std::hypot(x, y); }
    [[nodiscard]] bool acoustic_side() const { return z > 0.0; }
};

using CoefficientFn = std::function<InterfaceCoefficients(cplx qx, double qy)>;

struct IncidentChannels {
    double arrival = 0.0;   // Dirac time of the incident pressure
    double amplitude = 0.0; // Dirac weight
    std::vector<double> u_x, u_y, u_z;
};

struct ReflectedChannels {
    ArrivalTimes arrivals;
    std::vector<double> xi; // time primitive of the reflected pressure
    std::vector<double> u_x, u_y, u_z;
};

struct TransmittedChannels {
    BranchTag tag = BranchTag::TransmittedPf;
    ArrivalTimes arrivals;
    std::vector<double> u_x, u_y, u_z;
};

struct GreenTrace {
    Receiver receiver;
    std::vector<double> t;
    // Filled for receivers in the fluid.
    IncidentChannels incident;
    ReflectedChannels reflected;
    // Filled for receivers in the porous solid, ordered Pf, Ps, S.
    std::vector<TransmittedChannels> transmitted;
};

/// Which integral(s) a sample time falls in.
enum class Regime { None, HeadOnly, VolumeAndHead, VolumeOnly };

inline const char *regime_name(Regime r)
{
    switch (r) {
    case Regime::None:
        return "none";
    case Regime::HeadOnly:
        return "head";
    case Regime::VolumeAndHead:
        return "volume+head";
    case Regime::VolumeOnly:
        return "volume";
    }
    return "?";
}

inline Regime classify(const ArrivalTimes &a, double t)
{
    const double dead = 1e-12 * t;
    if (a.head_exists) {
        if (t <= a.t_h1 + dead) {
            return Regime::None;
        }
        if (t <= a.t0 + dead) {
            return Regime::HeadOnly;
        }
        if (t < a.t_h2 - dead) {
            return Regime::VolumeAndHead;
        }
        return Regime::VolumeOnly;
    }
    return t <= a.t0 + dead ? Regime::None : Regime::VolumeOnly;
}

/// Evaluates the reflected or one transmitted wave at single times.
class WaveEvaluator
{
public:
    using Values = std::array<double, 3>;

    WaveEvaluator(const Media &md, const Geometry &geom, BranchTag tag, const QuadratureConfig &cfg,
                  CoefficientFn coef = {})
        : md_(md), contour_(geom, make_branch(md, tag), md.v_max()), cfg_(cfg), coef_(std::move(coef))
    {
        if (!coef_) {
            coef_ = [m = md_](cplx qx, double qy) { return solve_coefficients(m, qx, qy); };
        }
        const auto &P = md.poro.P;
        switch (tag) {
        case BranchTag::ReflectedAcoustic:
            prefactor_ = {1.0, 1.0 / md.acoustic.rho_plus, 1.0 / md.acoustic.rho_plus};
            break;
        case BranchTag::TransmittedPf:
            prefactor_ = {-P.m11, P.m11, 0.0};
            break;
        case BranchTag::TransmittedPs:
            prefactor_ = {-P.m12, P.m12, 0.0};
            break;
        case BranchTag::TransmittedS:
            prefactor_ = {-1.0, 1.0, 0.0};
            break;
        }
        for (auto &c : prefactor_) {
            c /= std::numbers::pi * std::numbers::pi;
        }
    }

    [[nodiscard]] const Contour &contour() const { return contour_; }
    [[nodiscard]] BranchTag tag() const { return contour_.branch().tag; }
    [[nodiscard]] int channel_count() const { return tag() == BranchTag::ReflectedAcoustic ? 3 : 2; }

    /// Channel kernels G at slowness (g, q). Reflected: (xi, u_x, u_z);
    /// transmitted: (u_x, u_z, unused).
    [[nodiscard]] std::array<cplx, 3> kernel(cplx g, double q) const
    {
        const InterfaceCoefficients c = coef_(g, q);
        const cplx ig = cplx(0.0, 1.0) * g;
        switch (tag()) {
        case BranchTag::ReflectedAcoustic:
            return {c.r, ig * c.r, kappa(md_.acoustic.v_plus, g, q) * c.r};
        case BranchTag::TransmittedPf:
            return {ig * c.t_pf, kappa(md_.poro.v_pf, g, q) * c.t_pf, 0.0};
        case BranchTag::TransmittedPs:
            return {ig * c.t_ps, kappa(md_.poro.v_ps, g, q) * c.t_ps, 0.0};
        case BranchTag::TransmittedS:
            return {ig * kappa(md_.poro.v_s, g, q) * c.t_s, (g * g + q * q) * c.t_s, 0.0};
        }
        return {};
    }

    [[nodiscard]] Values volume_integrand(double t, double q) const
    {
        const ContourPoint p = contour_.gamma(t, q);
        const auto G = kernel(p.value, q);
        return {(G[0] * p.dt).real(), (G[1] * p.dt).real(), (G[2] * p.dt).real()};
    }

    [[nodiscard]] Values head_integrand(double t, double q) const
    {
        const ContourPoint p = contour_.upsilon(t, q);
        const auto G = kernel(p.value, q);
        return {(std::conj(G[0]) * p.dt).real(), (std::conj(G[1]) * p.dt).real(),
                (std::conj(G[2]) * p.dt).real()};
    }

    [[nodiscard]] Values operator()(double t) const
    {
        const ArrivalTimes &a = contour_.arrivals();
        const Regime regime = classify(a, t);
        Values sum{0.0, 0.0, 0.0};
        if (regime == Regime::None) {
            return sum;
        }
        try {
            auto vol = [&](double q) { return volume_integrand(t, q); };
            auto head = [&](double q) { return head_integrand(t, q); };
            if (regime == Regime::HeadOnly) {
                const double q1 = contour_.q1_of_t(t);
                sum = integrate(head, 0.0, q1, cfg_, EndpointShape::BothEnds);
            } else {
                const double q0 = contour_.q0_of_t(t);
                sum = integrate(vol, 0.0, q0, cfg_, EndpointShape::UpperInverseSqrt);
                if (regime == Regime::VolumeAndHead) {
                    const double q1 = contour_.q1_of_t(t);
                    if (q1 > q0) {
                        const Values h = integrate(head, q0, q1, cfg_, EndpointShape::BothEnds);
                        for (int k = 0; k < 3; ++k) {
                            sum[k] += h[k];
                        }
                    }
                }
            }
        } catch (const NumericalError &e) {
            std::ostringstream os;
            os.precision(17);
            os << e.what() << " [wave " << branch_name(tag()) << ", t=" << t << ", regime " << regime_name(regime)
               << "]";
            throw NumericalError(os.str());
        }
        for (int k = 0; k < 3; ++k) {
            sum[k] *= prefactor_[k];
        }
        return sum;
    }

private:
    Media md_;
    Contour contour_;
    QuadratureConfig cfg_;
    CoefficientFn coef_;
    std::array<double, 3> prefactor_{};
};

/// Runs f(i) for i in [0, n) on up to `threads` threads; each index is handled
/// exactly once and the first exception is rethrown.
template <class F> void parallel_for(std::size_t n, unsigned threads, F &&f)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += threads) {
                    f(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// Incident field at (x, 0, z): displacement sampled from its closed form,
/// pressure Dirac kept as (arrival, amplitude).
inline IncidentChannels incident_trace(const Media &md, double h, const Receiver &rc, const std::vector<double> &t)
{
    const Geometry g{h, rc.offset(), rc.z};
    const double r = g.direct_distance();
    const double v = md.acoustic.v_plus;
    IncidentChannels out;
    out.arrival = r / v;
    out.amplitude = 1.0 / (4.0 * std::numbers::pi * v * v * r);
    const double k = 1.0 / (4.0 * std::numbers::pi * v * v * r * r * r * md.acoustic.rho_plus);
    out.u_x.assign(t.size(), 0.0);
    out.u_y.assign(t.size(), 0.0);
    out.u_z.assign(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] > out.arrival) {
            out.u_x[i] = g.x * t[i] * k;
            out.u_z[i] = (g.z - h) * t[i] * k;
        }
    }
    return out;
}

inline ReflectedChannels reflected_trace(const Media &md, double h, const Receiver &rc, const std::vector<double> &t,
                                         const QuadratureConfig &cfg, unsigned threads = 1, CoefficientFn coef = {})
{
    const WaveEvaluator ev(md, Geometry{h, rc.offset(), rc.z}, BranchTag::ReflectedAcoustic, cfg, std::move(coef));
    ReflectedChannels out;
    out.arrivals = ev.contour().arrivals();
    out.xi.assign(t.size(), 0.0);
    out.u_x.assign(t.size(), 0.0);
    out.u_y.assign(t.size(), 0.0);
    out.u_z.assign(t.size(), 0.0);
    parallel_for(t.size(), threads, [&](std::size_t i) {
        const auto v = ev(t[i]);
        out.xi[i] = v[0];
        out.u_x[i] = v[1];
        out.u_z[i] = v[2];
    });
    return out;
}

inline TransmittedChannels transmitted_trace(const Media &md, double h, const Receiver &rc, BranchTag tag,
                                             const std::vector<double> &t, const QuadratureConfig &cfg,
                                             unsigned threads = 1, CoefficientFn coef = {})
{
    const WaveEvaluator ev(md, Geometry{h, rc.offset(), rc.z}, tag, cfg, std::move(coef));
    TransmittedChannels out;
    out.tag = tag;
    out.arrivals = ev.contour().arrivals();
    out.u_x.assign(t.size(), 0.0);
    out.u_y.assign(t.size(), 0.0);
    out.u_z.assign(t.size(), 0.0);
    parallel_for(t.size(), threads, [&](std::size_t i) {
        const auto v = ev(t[i]);
        out.u_x[i] = v[0];
        out.u_z[i] = v[1];
    });
    return out;
}

inline constexpr std::array<BranchTag, 3> transmitted_tags{BranchTag::TransmittedPf, BranchTag::TransmittedPs,
                                                           BranchTag::TransmittedS};

/// Maps a trace computed at (offset, 0, z) to the receiver's azimuth.
inline GreenTrace rotate_to_3d(GreenTrace g, double x, double y)
{
    const double rho = std::hypot(x, y);
    const double cx = rho > 0.0 ? x / rho : 1.0;
    const double cy = rho > 0.0 ? y / rho : 0.0;
    auto rotate = [&](std::vector<double> &ux, std::vector<double> &uy) {
        uy.resize(ux.size());
        for (std::size_t i = 0; i < ux.size(); ++i) {
            const double radial = ux[i];
            ux[i] = cx * radial;
            uy[i] = cy * radial;
        }
    };
    rotate(g.incident.u_x, g.incident.u_y);
    rotate(g.reflected.u_x, g.reflected.u_y);
    for (auto &tr : g.transmitted) {
        rotate(tr.u_x, tr.u_y);
    }
    g.receiver.x = x;
    g.receiver.y = y;
    return g;
}

/// All Green channels at a receiver, sampled at times t.
inline GreenTrace compute_green(const Media &md, double h, const Receiver &rc, const std::vector<double> &t,
                                const QuadratureConfig &cfg, unsigned threads = 1, const CoefficientFn &coef = {})
{
    if (rc.z == 0.0) {
        throw DomainError("receiver on the interface");
    }
    GreenTrace g;
    g.receiver = Receiver{rc.offset(), 0.0, rc.z};
    g.t = t;
    if (rc.acoustic_side()) {
        g.incident = incident_trace(md, h, g.receiver, t);
        g.reflected = reflected_trace(md, h, g.receiver, t, cfg, threads, coef);
    } else {
        for (BranchTag tag : transmitted_tags) {
            g.transmitted.push_back(transmitted_trace(md, h, g.receiver, tag, t, cfg, threads, coef));
        }
    }
    return rotate_to_3d(std::move(g), rc.x, rc.y);
}

} // namespace acoporo

#endif
