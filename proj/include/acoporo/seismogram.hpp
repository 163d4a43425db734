#ifndef ACOPORO_SEISMOGRAM_HPP
#define ACOPORO_SEISMOGRAM_HPP

// Source wavelet and midpoint convolution of Green traces. Green channels are
// sampled at tau_j = (j + 1/2) dt and seismograms are produced at t_k = k dt:
//
//     S(t_k) = dt * sum_{j < k} g(tau_j) f(t_k - tau_j)

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <acoporo/errors.hpp>
#include <acoporo/green.hpp>

namespace acoporo
{

struct SourceWavelet {
    double f0 = 15.0;  // dominant frequency, Hz
    double gain = 1.0; // overall amplitude factor
};

// f(t) = 2 (pi/f0)^2 [3 + 12 w + 4 w^2] e^{-w},  w = (pi f0 (t - 1/f0))^2
inline double wavelet_value(double t, double f0)
{
    const double amp = std::numbers::pi * std::numbers::pi / (f0 * f0);
    const double u = std::numbers::pi * f0 * (t - 1.0 / f0);
    const double w = u * u;
    return 2.0 * amp * (3.0 + 12.0 * w + 4.0 * w * w) * std::exp(-w);
}

inline double wavelet_derivative(double t, double f0)
{
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double u = t - 1.0 / f0;
    const double w = pi2 * f0 * f0 * u * u;
    return 4.0 * pi2 * pi2 * u * (9.0 - 4.0 * w - 4.0 * w * w) * std::exp(-w);
}

/// Duration after which the wavelet is below 1e-20 of its peak.
inline double wavelet_support(double f0) { return 3.6 / f0; }

struct WaveSeismogram {
    std::string name;
    double first_arrival = 0.0;
    std::vector<double> p, u_x, u_y, u_z;
};

struct Seismogram {
    Receiver receiver;
    std::vector<double> t;
    std::vector<double> p, u_x, u_y, u_z;
    std::vector<WaveSeismogram> waves;
};

inline void check_grid(double dt, double f0)
{
    if (!(dt > 0.0) || dt > 1.0 / (40.0 * f0)) {
        std::ostringstream os;
        os << "time step " << dt << " s exceeds 1/(40 f0) = " << 1.0 / (40.0 * f0) << " s";
        throw GridTooCoarse(os.str());
    }
}

/// Midpoint convolution with kernel k sampled as k((m + 1/2) dt), m < support.
/// Output has g.size() + 1 samples at k dt.
template <class K>
std::vector<double> convolve_samples(const std::vector<double> &g, double dt, K &&kernel, std::size_t support)
{
    std::vector<double> ks(support);
    for (std::size_t m = 0; m < support; ++m) {
        ks[m] = kernel((m + 0.5) * dt);
    }
    std::vector<double> out(g.size() + 1, 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g[j] == 0.0) {
            continue;
        }
        const std::size_t end = std::min(out.size(), j + 1 + support);
        for (std::size_t k = j + 1; k < end; ++k) {
            out[k] += g[j] * ks[k - j - 1];
        }
    }
    for (auto &v : out) {
        v *= dt;
    }
    return out;
}

/// Seismograms at t_k = k dt from a Green trace sampled at (j + 1/2) dt.
///
/// The reflected pressure is rebuilt from the primitive xi as
/// xi * f' + f(0) xi(t), which is d/dt (xi * f) exactly; the second term is the
/// boundary term of the integration by parts (f does not vanish at t = 0).
inline Seismogram convolve(const GreenTrace &green, const SourceWavelet &src, double dt)
{
    check_grid(dt, src.f0);
    for (std::size_t j = 0; j < green.t.size(); ++j) {
        if (std::abs(green.t[j] - (j + 0.5) * dt) > 1e-9 * dt) {
            throw GridTooCoarse("Green trace is not sampled at (j + 1/2) dt");
        }
    }
    const std::size_t n = green.t.size();
    const std::size_t support = static_cast<std::size_t>(std::ceil(wavelet_support(src.f0) / dt)) + 1;
    auto f = [&](double t) { return src.gain * wavelet_value(t, src.f0); };
    auto df = [&](double t) { return src.gain * wavelet_derivative(t, src.f0); };

    Seismogram s;
    s.receiver = green.receiver;
    s.t.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        s.t[k] = k * dt;
    }
    const std::vector<double> zero(n + 1, 0.0);
    s.p = s.u_x = s.u_y = s.u_z = zero;
    auto add = [](std::vector<double> &acc, const std::vector<double> &v) {
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += v[i];
        }
    };
    auto displacement = [&](WaveSeismogram &w, const std::vector<double> &ux, const std::vector<double> &uy,
                            const std::vector<double> &uz) {
        w.u_x = ux.empty() ? zero : convolve_samples(ux, dt, f, support);
        w.u_y = uy.empty() ? zero : convolve_samples(uy, dt, f, support);
        w.u_z = uz.empty() ? zero : convolve_samples(uz, dt, f, support);
        add(s.u_x, w.u_x);
        add(s.u_y, w.u_y);
        add(s.u_z, w.u_z);
        add(s.p, w.p);
    };

    if (green.receiver.acoustic_side()) {
        WaveSeismogram inc;
        inc.name = "incident";
        inc.first_arrival = green.incident.arrival;
        inc.p = zero;
        for (std::size_t k = 0; k <= n; ++k) {
            const double tau = s.t[k] - green.incident.arrival;
            if (tau > 0.0) {
                inc.p[k] = green.incident.amplitude * f(tau);
            }
        }
        displacement(inc, green.incident.u_x, green.incident.u_y, green.incident.u_z);
        s.waves.push_back(std::move(inc));

        WaveSeismogram ref;
        ref.name = "reflected";
        ref.first_arrival = green.reflected.arrivals.first();
        ref.p = convolve_samples(green.reflected.xi, dt, df, support);
        // xi(t_k) taken from the last sample before t_k, which keeps p causal.
        const double f_zero = f(0.0);
        for (std::size_t k = 1; k <= n; ++k) {
            ref.p[k] += f_zero * green.reflected.xi[k - 1];
        }
        displacement(ref, green.reflected.u_x, green.reflected.u_y, green.reflected.u_z);
        s.waves.push_back(std::move(ref));
    } else {
        for (const auto &tr : green.transmitted) {
            WaveSeismogram w;
            w.name = branch_name(tr.tag);
            w.first_arrival = tr.arrivals.first();
            w.p = zero;
            displacement(w, tr.u_x, tr.u_y, tr.u_z);
            s.waves.push_back(std::move(w));
        }
    }
    return s;
}

} // namespace acoporo

#endif
