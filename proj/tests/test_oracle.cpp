#include <numbers>

#include <gtest/gtest.h>

#include <acoporo/oracle.hpp>

#include "fixture.hpp"

using namespace acoporo;

TEST(Oracle, LaplaceOfZeroTrace) { EXPECT_EQ(laplace_of_trace(std::vector<double>(100, 0.0), 1e-3, 20.0), 0.0); }

TEST(Oracle, LaplaceOfStep)
{
    // H(t - a) on [0, T]: (e^{-sa} - e^{-sT}) / s.
    const double dt = 1e-4;
    const double a = 0.3;
    const double T = 3.0;
    std::vector<double> g;
    for (double t = 0.5 * dt; t < T; t += dt) {
        g.push_back(t > a ? 1.0 : 0.0);
    }
    const double s = 20.0;
    const double exact = (std::exp(-s * a) - std::exp(-s * g.size() * dt)) / s;
    EXPECT_NEAR(laplace_of_trace(g, dt, s), exact, 1e-4 * exact);
}

TEST(Oracle, BreakpointQuadratureIntegratesInverseSqrt)
{
    const auto tq = breakpoint_quadrature({0.0, 1.0}, 200);
    double v = 0.0;
    for (std::size_t i = 0; i < tq.t.size(); ++i) {
        v += tq.w[i] / std::sqrt(tq.t[i] * (1.0 - tq.t[i]));
    }
    EXPECT_NEAR(v, std::numbers::pi, 1e-12);
}

TEST(Oracle, IntegrandEvenInTransverseSlowness)
{
    const Media md = fixture::media();
    for (OracleChannel ch : {OracleChannel::ReflectedXi, OracleChannel::SUz, OracleChannel::PsUx}) {
        const Receiver rc = is_reflected(ch) ? fixture::receiver1() : fixture::receiver2();
        for (double qx : {-3e-4, 1e-4, 7e-4}) {
            const cplx a = laplace_integrand(md, fixture::h, rc, 20.0, ch, qx, 2e-4);
            const cplx b = laplace_integrand(md, fixture::h, rc, 20.0, ch, qx, -2e-4);
            EXPECT_LE(std::abs(a - b), 1e-14 * std::abs(a));
        }
    }
}

TEST(Oracle, IncidentPressureMatchesClosedForm)
{
    // The incident pressure is a Dirac of weight 1/(4 pi V^2 r) at r/V.
    const Media md = fixture::media();
    const double r = std::hypot(400.0, 33.0);
    for (double s : {20.0, 40.0}) {
        LaplaceProbe probe;
        probe.s = s;
        probe.receiver = fixture::receiver1();
        const double v = laplace_reference(probe, md, fixture::h, OracleChannel::IncidentPressure);
        const double exact = std::exp(-s * r / 1500.0) / (4.0 * std::numbers::pi * 1500.0 * 1500.0 * r);
        EXPECT_NEAR(v, exact, 1e-9 * exact);
    }
}

TEST(Oracle, IncidentDisplacementMatchesClosedForm)
{
    // u_x = k t H(t - t0), whose transform is k e^{-s t0} (t0 / s + 1 / s^2).
    const Media md = fixture::media();
    const Receiver rc = fixture::receiver1();
    const double r = std::hypot(400.0, 33.0);
    const double t0 = r / 1500.0;
    const double k = 400.0 / (4.0 * std::numbers::pi * 1500.0 * 1500.0 * r * r * r * 1020.0);
    const auto inc = incident_trace(md, fixture::h, rc, {0.5 * t0, 2.0 * t0});
    EXPECT_EQ(inc.u_x[0], 0.0);
    EXPECT_NEAR(inc.u_x[1], 2.0 * t0 * k, 1e-12 * t0 * k);
    for (double s : {20.0, 40.0}) {
        LaplaceProbe probe;
        probe.s = s;
        probe.receiver = rc;
        const double ux = laplace_reference(probe, md, fixture::h, OracleChannel::IncidentUx);
        const double exact = k * std::exp(-s * t0) * (t0 / s + 1.0 / (s * s));
        EXPECT_NEAR(ux, exact, 1e-8 * exact);
    }
}

TEST(Oracle, ReflectedPrimitiveMatchesMainPath)
{
    const Media md = fixture::media();
    const Receiver rc = fixture::receiver1();
    const WaveEvaluator ev(md, fixture::geometry1(), BranchTag::ReflectedAcoustic, {1000, true});
    const auto tq = breakpoint_quadrature(laplace_breaks(ev.contour().arrivals(), 20.0), 100);
    std::vector<double> xi(tq.t.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        xi[i] = ev(tq.t[i])[0];
    }
    LaplaceProbe probe;
    probe.s = 20.0;
    probe.receiver = rc;
    const double ref = laplace_reference(probe, md, fixture::h, OracleChannel::ReflectedXi);
    EXPECT_NEAR(laplace_of_samples(tq, xi, 20.0), ref, 1e-3 * std::abs(ref));
}

TEST(Oracle, NotConvergedWhenPanelsCapped)
{
    const Media md = fixture::media();
    LaplaceProbe probe;
    probe.s = 20.0;
    probe.receiver = fixture::receiver2();
    probe.panels = 4;
    probe.max_panels = 4;
    EXPECT_THROW(laplace_reference(probe, md, fixture::h, OracleChannel::SUz), NotConverged);
    probe.s = 0.0;
    EXPECT_THROW(laplace_reference(probe, md, fixture::h, OracleChannel::SUz), NotConverged);
}

TEST(Oracle, GridMinimumVertical)
{
    const Media md = fixture::media();
    const WaveBranch b = make_branch(md, BranchTag::TransmittedPf);
    const Geometry g{500.0, 0.0, -533.0};
    EXPECT_NEAR(grid_min_arrival(0.0, g, b, 100), 500.0 / 1500.0 + 533.0 / md.poro.v_pf, 1e-15);
}

TEST(Oracle, GridMinimumConverges)
{
    const Media md = fixture::media();
    const WaveBranch b = make_branch(md, BranchTag::TransmittedS);
    const double exact = fictitious_arrival(2e-4, fixture::geometry2(), b);
    double prev = INFINITY;
    for (int n : {4, 16, 64}) {
        const double e = grid_min_arrival(2e-4, fixture::geometry2(), b, n) - exact;
        EXPECT_GE(e, -1e-12);
        EXPECT_LE(e, prev + 1e-15);
        prev = e;
    }
    EXPECT_LE(prev, 1e-10);
}
