#pragma once

#include <cmath>
#include <numbers>

#include "gridmpc/frames.hpp"

namespace gridmpc {

/// Fixed-frequency reference generator for the PCC voltage. The microgrid
/// frequency is pinned by this oscillator; it is never drooped.
struct ReferenceOscillator {
    double frequency_hz = 60.0;
    double amplitude = 311.0;  // phase-to-neutral peak, volts
    double phase = 0.0;        // radians, kept in [0, 2*pi)
};

/// Rotating reference vector at absolute time t.
inline TwoAxis oscillator_reference(const ReferenceOscillator& osc, double t) {
    const double theta = 2.0 * std::numbers::pi * osc.frequency_hz * t + osc.phase;
    return {osc.amplitude * std::cos(theta), osc.amplitude * std::sin(theta)};
}

/// Wrap an accumulated phase into [0, 2*pi).
inline double wrap_phase(double phase) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phase = std::fmod(phase, two_pi);
    if (phase < 0.0) phase += two_pi;
    return phase;
}

}  // namespace gridmpc
