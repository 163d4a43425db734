#include <random>

#include <gtest/gtest.h>

#include <acoporo/cagniard.hpp>
#include <acoporo/oracle.hpp>

#include "fixture.hpp"

using namespace acoporo;

namespace
{

Contour contour(const Geometry &g, BranchTag tag)
{
    const Media md = fixture::media();
    return Contour(g, make_branch(md, tag), md.v_max());
}

constexpr BranchTag kTransmitted[] = {BranchTag::TransmittedPf, BranchTag::TransmittedPs, BranchTag::TransmittedS};

} // namespace

TEST(Cagniard, SnellTimeVertical)
{
    const Media md = fixture::media();
    const WaveBranch b = make_branch(md, BranchTag::TransmittedS);
    const Geometry g{500.0, 0.0, -533.0};
    EXPECT_NEAR(snell_time(0.0, 0.0, g, b), 500.0 / 1500.0 + 533.0 / md.poro.v_s, 1e-15);
}

TEST(Cagniard, SaddleIsStationary)
{
    for (BranchTag tag : kTransmitted) {
        const Contour c = contour(fixture::geometry2(), tag);
        for (double q : {0.0, 2e-4, 6e-4}) {
            const Saddle s = c.saddle(q);
            const double e = 1e-3;
            const double slope = (c.snell_time(s.xi + e, q) - c.snell_time(s.xi - e, q)) / (2.0 * e);
            EXPECT_LE(std::abs(slope), 1e-10) << branch_name(tag);
        }
    }
}

TEST(Cagniard, ReflectedArrivalsReceiver1)
{
    const Media md = fixture::media();
    const auto a = arrival_times(fixture::geometry1(), make_branch(md, BranchTag::ReflectedAcoustic), md.v_max());
    EXPECT_NEAR(a.t0, std::hypot(400.0, 1033.0) / 1500.0, 1e-9);
    EXPECT_FALSE(a.head_exists);
}

TEST(Cagniard, FictitiousArrivalMatchesGridMinimum)
{
    const Media md = fixture::media();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const Geometry g{100.0 + 900.0 * u(rng), 2000.0 * u(rng), -(50.0 + 950.0 * u(rng))};
        const BranchTag tag = kTransmitted[i % 3];
        const WaveBranch b = make_branch(md, tag);
        const double q = 1e-3 * u(rng);
        EXPECT_NEAR(fictitious_arrival(q, g, b), grid_min_arrival(q, g, b, 4000), 1e-8);
    }
}

TEST(Cagniard, FictitiousArrivalEvenAndIncreasing)
{
    for (BranchTag tag : kTransmitted) {
        const Contour c = contour(fixture::geometry2(), tag);
        double prev = c.fictitious_arrival(0.0);
        for (int i = 1; i <= 200; ++i) {
            const double q = i * 1e-5;
            const double t = c.fictitious_arrival(q);
            EXPECT_GT(t, prev);
            EXPECT_EQ(t, c.fictitious_arrival(-q));
            prev = t;
        }
    }
}

TEST(Cagniard, TransmittedArrivalOrder)
{
    const Media md = fixture::media();
    const auto g = fixture::geometry2();
    const double pf = arrival_times(g, make_branch(md, BranchTag::TransmittedPf), md.v_max()).t0;
    const double s = arrival_times(g, make_branch(md, BranchTag::TransmittedS), md.v_max()).t0;
    const double ps = arrival_times(g, make_branch(md, BranchTag::TransmittedPs), md.v_max()).t0;
    EXPECT_LT(pf, s);
    EXPECT_LT(s, ps);
}

TEST(Cagniard, PfCarriesNoHeadWave)
{
    const Media md = fixture::media();
    for (double x : {0.0, 400.0, 3000.0, 20000.0}) {
        const Geometry g{500.0, x, -533.0};
        EXPECT_FALSE(arrival_times(g, make_branch(md, BranchTag::TransmittedPf), md.v_max()).head_exists);
    }
}

TEST(Cagniard, ReciprocalIdentity)
{
    for (BranchTag tag : kTransmitted) {
        const Contour c = contour(fixture::geometry2(), tag);
        const double t0 = c.arrivals().t0;
        for (int i = 1; i <= 100; ++i) {
            const double t = t0 * (1.0 + 0.01 * i);
            EXPECT_LE(std::abs(c.fictitious_arrival(c.q0_of_t(t)) - t), 1e-9 * t);
        }
        EXPECT_EQ(c.q0_of_t(t0), 0.0);
    }
}

TEST(Cagniard, HeadWindowEndpoints)
{
    for (const auto &[g, tag] : {std::pair{fixture::geometry2(), BranchTag::TransmittedPs},
                                 std::pair{fixture::wide_reflection(), BranchTag::ReflectedAcoustic}}) {
        const Contour c = contour(g, tag);
        const ArrivalTimes &a = c.arrivals();
        ASSERT_TRUE(a.head_exists) << branch_name(tag);
        EXPECT_LT(a.t_h1, a.t0);
        EXPECT_LT(a.t0, a.t_h2);
        EXPECT_NEAR(c.q1_of_t(a.t_h1), 0.0, 1e-8);
        EXPECT_NEAR(c.q1_of_t(a.t_h2), a.q_max, 1e-8 * std::max(1.0, a.q_max));
        // Head and volume fictitious times touch at q_max.
        EXPECT_NEAR(c.fictitious_arrival(a.q_max), c.head_time(a.q_max), 1e-9 * a.t_h2);
        EXPECT_NEAR(c.fictitious_arrival(a.q_max), a.t_h2, 1e-9 * a.t_h2);
        for (int i = 0; i <= 50; ++i) {
            const double q = 2.0 * a.q_max * i / 50.0;
            EXPECT_LE(c.head_time(q), c.fictitious_arrival(q) + 1e-12);
        }
    }
}

TEST(Cagniard, ReceiverTwoPsHeadWave)
{
    const Media md = fixture::media();
    const auto a = arrival_times(fixture::geometry2(), make_branch(md, BranchTag::TransmittedPs), md.v_max());
    EXPECT_TRUE(a.head_exists);
    const auto s = arrival_times(fixture::geometry2(), make_branch(md, BranchTag::TransmittedS), md.v_max());
    EXPECT_FALSE(s.head_exists);
}

TEST(Cagniard, VolumeContourResiduals)
{
    const std::pair<Geometry, BranchTag> cases[] = {
        {fixture::geometry1(), BranchTag::ReflectedAcoustic}, {fixture::wide_reflection(), BranchTag::ReflectedAcoustic},
        {fixture::geometry2(), BranchTag::TransmittedPf},     {fixture::geometry2(), BranchTag::TransmittedPs},
        {fixture::geometry2(), BranchTag::TransmittedS}};
    for (const auto &[g, tag] : cases) {
        const Contour c = contour(g, tag);
        const double t0 = c.arrivals().t0;
        for (int i = 1; i <= 20; ++i) {
            const double t = t0 * (1.0 + 0.05 * i * i / 20.0);
            const double q0 = c.q0_of_t(t);
            for (int j = 0; j < 20; ++j) {
                const double q = q0 * (j + 0.5) / 20.0;
                const ContourPoint p = c.gamma(t, q);
                EXPECT_LE(p.residual, 1e-10) << branch_name(tag) << " t=" << t << " q=" << q;
                EXPECT_LE(std::abs(c.phase(p.value, q) - t), 1e-10);
                EXPECT_GT(p.value.real(), 0.0);
                EXPECT_LT(p.value.imag(), 0.0);
            }
        }
    }
}

TEST(Cagniard, VolumeContourDerivative)
{
    for (BranchTag tag : {BranchTag::ReflectedAcoustic, BranchTag::TransmittedPs, BranchTag::TransmittedS}) {
        const Geometry g = tag == BranchTag::ReflectedAcoustic ? fixture::geometry1() : fixture::geometry2();
        const Contour c = contour(g, tag);
        const double t = c.arrivals().t0 * 1.2;
        const double q = 0.5 * c.q0_of_t(t);
        const double e = 1e-7 * t;
        const cplx fd = (c.gamma(t + e, q).value - c.gamma(t - e, q).value) / (2.0 * e);
        const cplx dt = c.gamma(t, q).dt;
        EXPECT_LE(std::abs(fd - dt), 1e-6 * std::abs(dt)) << branch_name(tag);
    }
}

TEST(Cagniard, ReflectedContourClosedForm)
{
    const Contour c = contour(fixture::geometry1(), BranchTag::ReflectedAcoustic);
    const double r = fixture::geometry1().r();
    const double t = 0.9;
    for (double q : {0.0, 1e-4, 3e-4}) {
        const ContourPoint p = c.gamma(t, q);
        EXPECT_LE(p.residual, 1e-12);
        EXPECT_NEAR(p.value.imag(), -400.0 * t / (r * r), 1e-15);
    }
}

TEST(Cagniard, ReflectedVerticalContourIsReal)
{
    const Contour c = contour(Geometry{500.0, 0.0, 533.0}, BranchTag::ReflectedAcoustic);
    const ContourPoint p = c.gamma(0.8, 1e-4);
    EXPECT_EQ(p.value.imag(), 0.0);
}

TEST(Cagniard, VolumeContourApproachesSaddle)
{
    const Contour c = contour(fixture::geometry2(), BranchTag::TransmittedS);
    const double q = 1e-4;
    const Saddle s = c.saddle(q);
    const double dt = 1e-10 * s.time;
    const ContourPoint p = c.gamma(s.time + dt, q);
    // Quadratic phase near the saddle: Re g ~ sqrt(2 dt / phi'').
    EXPECT_NEAR(p.value.real(), std::sqrt(2.0 * dt / s.curvature), 1e-3 * std::sqrt(2.0 * dt / s.curvature));
    EXPECT_NEAR(p.value.imag(), -s.sigma, 1e-8 * s.sigma);
}

TEST(Cagniard, HeadContour)
{
    for (const auto &[g, tag] : {std::pair{fixture::geometry2(), BranchTag::TransmittedPs},
                                 std::pair{fixture::wide_reflection(), BranchTag::ReflectedAcoustic}}) {
        const Contour c = contour(g, tag);
        const ArrivalTimes &a = c.arrivals();
        for (int i = 1; i < 20; ++i) {
            const double t = a.t_h1 + (a.t_h2 - a.t_h1) * i / 20.0;
            const double q1 = c.q1_of_t(t);
            const double qlo = t > a.t0 ? c.q0_of_t(t) : 0.0;
            for (int j = 0; j < 10; ++j) {
                const double q = qlo + (q1 - qlo) * (j + 0.5) / 10.0;
                ASSERT_TRUE(c.in_head_domain(t, q));
                const ContourPoint p = c.upsilon(t, q);
                EXPECT_LE(p.residual, 1e-10) << branch_name(tag);
                EXPECT_EQ(p.value.real(), 0.0);
                EXPECT_LT(p.dt.imag(), 0.0);
            }
        }
        // At the fictitious arrival both contours meet at the saddle.
        const double q = 0.5 * a.q_max;
        const Saddle s = c.saddle(q);
        EXPECT_NEAR(c.upsilon(s.time, q).value.imag(), -s.sigma, 1e-9 * s.sigma);
    }
}

TEST(Cagniard, DomainErrors)
{
    const Contour ps = contour(fixture::geometry2(), BranchTag::TransmittedPs);
    EXPECT_THROW((void)ps.gamma(0.5 * ps.arrivals().t0, 0.0), DomainError);
    EXPECT_THROW((void)ps.upsilon(0.5 * ps.arrivals().t0, 0.0), DomainError);
    const Contour pf = contour(fixture::geometry2(), BranchTag::TransmittedPf);
    EXPECT_THROW((void)pf.q1_of_t(1.0), DomainError);
}
