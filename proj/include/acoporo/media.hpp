#ifndef ACOPORO_MEDIA_HPP
#define ACOPORO_MEDIA_HPP

// Material description of the two half-spaces: an acoustic fluid on top of a
// non-dissipative Biot poroelastic solid. Everything the wave computations need
// (densities, moduli, eigen-decomposition of the compressional system and the
// three bulk velocities) is derived here once and then passed around by value.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <acoporo/errors.hpp>

namespace acoporo
{

struct AcousticMedium {
    double rho_plus = 0.0; // kg/m^3
    double v_plus = 0.0;   // m/s
};

struct PoroelasticParams {
    double rho_s = 0.0; // solid density, kg/m^3
    double rho_f = 0.0; // fluid density, kg/m^3
    double phi = 0.0;   // porosity
    double a = 0.0;     // tortuosity
    double K_s = 0.0;   // solid bulk modulus, Pa
    double K_f = 0.0;   // fluid bulk modulus, Pa
    double K_b = 0.0;   // frame bulk modulus, Pa
    double mu = 0.0;    // frame shear modulus, Pa
};

/// Row-major real 2x2 matrix.
struct Matrix2 {
    double m11 = 0.0, m12 = 0.0, m21 = 0.0, m22 = 0.0;

    [[nodiscard]] double det() const { return m11 * m22 - m12 * m21; }
    [[nodiscard]] Matrix2 inverse() const
    {
        const double d = det();
        return {m22 / d, -m12 / d, -m21 / d, m11 / d};
    }
    [[nodiscard]] double norm_inf() const
    {
        return std::max(std::abs(m11) + std::abs(m12), std::abs(m21) + std::abs(m22));
    }
    friend Matrix2 operator*(const Matrix2 &x, const Matrix2 &y)
    {
        return {x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22,
                x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
    }
    friend Matrix2 operator-(const Matrix2 &x, const Matrix2 &y)
    {
        return {x.m11 - y.m11, x.m12 - y.m12, x.m21 - y.m21, x.m22 - y.m22};
    }
};

struct PoroelasticDerived {
    double rho = 0.0;    // overall density
    double rho_f = 0.0;  // fluid density (copied, enters the interface matrix)
    double rho_w = 0.0;  // a * rho_f / phi
    double beta = 0.0;   // 1 - K_b / K_s
    double m = 0.0;      // Biot modulus
    double lambda = 0.0; // K_b - 2 mu / 3
    double mu = 0.0;
    double alpha = 0.0; // lambda + 2 mu + m beta^2
    Matrix2 A;          // density matrix
    Matrix2 B;          // modulus matrix
    // Columns are the eigenvectors of A^-1 B, first component normalized to 1;
    // column 1 pairs with the fast wave.
    Matrix2 P;
    double v_pf = 0.0;
    double v_ps = 0.0;
    double v_s = 0.0;
};

/// Both half-spaces, ready for the wave computations.
struct Media {
    AcousticMedium acoustic;
    PoroelasticDerived poro;

    /// Greatest velocity in the two media.
    [[nodiscard]] double v_max() const
    {
        return std::max({acoustic.v_plus, poro.v_pf, poro.v_ps, poro.v_s});
    }
};

/// Invariant violations for the raw parameters; empty when both media are usable.
inline std::vector<std::string> validate(const AcousticMedium &acoustic, const PoroelasticParams &poro)
{
    std::vector<std::string> out;
    auto positive = [&](double v, const char *name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            out.push_back(std::string(name) + " must be positive and finite");
        }
    };
    positive(acoustic.rho_plus, "acoustic density rho_plus");
    positive(acoustic.v_plus, "acoustic velocity v_plus");
    positive(poro.rho_s, "solid density rho_s");
    positive(poro.rho_f, "fluid density rho_f");
    if (!(poro.phi > 0.0 && poro.phi < 1.0)) {
        out.emplace_back("porosity phi must lie in (0, 1)");
    }
    if (!(poro.a >= 1.0) || !std::isfinite(poro.a)) {
        out.emplace_back("tortuosity a must be >= 1");
    }
    positive(poro.K_s, "solid bulk modulus K_s");
    positive(poro.K_f, "fluid bulk modulus K_f");
    positive(poro.K_b, "frame bulk modulus K_b");
    positive(poro.mu, "shear modulus mu");
    if (poro.K_s > 0.0 && poro.K_b > 0.0 && !(poro.K_b < poro.K_s)) {
        out.emplace_back("beta = 1 - K_b/K_s must lie in (0, 1): need K_b < K_s");
    }
    return out;
}

/// Biot-derived scalars, matrices and velocities. Throws NonPhysical when a
/// derived invariant fails.
inline PoroelasticDerived derive_poroelastic(const PoroelasticParams &p)
{
    if (const auto v = validate(AcousticMedium{1.0, 1.0}, p); !v.empty()) {
        throw NonPhysical(v.front());
    }
    PoroelasticDerived d;
    d.rho = p.phi * p.rho_f + (1.0 - p.phi) * p.rho_s;
    d.rho_f = p.rho_f;
    d.rho_w = p.a * p.rho_f / p.phi;
    d.beta = 1.0 - p.K_b / p.K_s;
    d.m = 1.0 / (p.phi / p.K_f + (d.beta - p.phi) / p.K_s);
    d.lambda = p.K_b - 2.0 * p.mu / 3.0;
    d.mu = p.mu;
    d.alpha = d.lambda + 2.0 * d.mu + d.m * d.beta * d.beta;

    const double det_a = d.rho * d.rho_w - d.rho_f * d.rho_f;
    if (!(det_a > 0.0)) {
        throw NonPhysical("rho * rho_w - rho_f^2 must be positive");
    }
    if (!(d.m > 0.0) || !std::isfinite(d.m)) {
        throw NonPhysical("Biot modulus m must be positive");
    }
    d.A = {d.rho, d.rho_f, d.rho_f, d.rho_w};
    d.B = {d.alpha, d.m * d.beta, d.m * d.beta, d.m};
    if (!(d.alpha > 0.0 && d.B.det() > 0.0)) {
        throw NonPhysical("modulus matrix B must be positive definite");
    }

    // Closed-form eigen-decomposition of C = A^-1 B.
    const Matrix2 C = d.A.inverse() * d.B;
    const double tr = C.m11 + C.m22;
    const double det = C.det();
    const double disc = tr * tr - 4.0 * det;
    if (!(disc > 0.0)) {
        throw NonPhysical("compressional eigenvalues are not distinct");
    }
    const double sq = std::sqrt(disc);
    // Stable pair of roots of l^2 - tr l + det.
    const double l_fast = 0.5 * (tr + std::copysign(sq, tr));
    const double l_slow = det / l_fast;
    if (!(l_fast > 0.0 && l_slow > 0.0)) {
        throw NonPhysical("compressional eigenvalues must be positive");
    }

    // Eigenvector (1, y) of C: C11 + C12 y = l. Use the better-conditioned row.
    auto second_component = [&](double l) {
        if (std::abs(C.m12) >= std::abs(C.m21) && C.m12 != 0.0) {
            return (l - C.m11) / C.m12;
        }
        return C.m21 / (l - C.m22);
    };
    d.P = {1.0, 1.0, second_component(l_fast), second_component(l_slow)};
    d.v_pf = std::sqrt(l_fast);
    d.v_ps = std::sqrt(l_slow);
    d.v_s = std::sqrt(d.mu * d.rho_w / det_a);
    if (!(d.v_ps < d.v_pf)) {
        throw NonPhysical("slow P velocity must be below fast P velocity");
    }
    return d;
}

inline Media make_media(const AcousticMedium &acoustic, const PoroelasticParams &poro)
{
    if (const auto v = validate(acoustic, poro); !v.empty()) {
        throw NonPhysical(v.front());
    }
    return Media{acoustic, derive_poroelastic(poro)};
}

} // namespace acoporo

#endif
