#ifndef ACOPORO_TESTS_FIXTURE_HPP
#define ACOPORO_TESTS_FIXTURE_HPP

// Material and geometry of the two-receiver reference experiment.

#include <acoporo/cagniard.hpp>
#include <acoporo/green.hpp>
#include <acoporo/media.hpp>

namespace fixture
{

inline acoporo::AcousticMedium acoustic() { return {1020.0, 1500.0}; }

inline acoporo::PoroelasticParams poro()
{
    return {2500.0, 1020.0, 0.4, 2.0, 16.0554e9, 2.295e9, 10e9, 9.63342e9};
}

inline acoporo::Media media() { return acoporo::make_media(acoustic(), poro()); }

constexpr double h = 500.0;
inline acoporo::Receiver receiver1() { return {400.0, 0.0, 533.0}; }
inline acoporo::Receiver receiver2() { return {400.0, 0.0, -533.0}; }
inline acoporo::Geometry geometry1() { return {h, 400.0, 533.0}; }
inline acoporo::Geometry geometry2() { return {h, 400.0, -533.0}; }

/// Fluid-side receiver far enough out for the reflected head wave to exist.
inline acoporo::Geometry wide_reflection() { return {h, 1500.0, 533.0}; }

} // namespace fixture

#endif
