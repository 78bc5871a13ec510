#pragma once

// The eight output-voltage vectors of a two-level three-phase bridge.

#include <stdexcept>

#include "gridmpc/frames.hpp"

namespace gridmpc {

/// Vector n of the SVM hexagon: zero for n in {0,7}, magnitude (2/3)*V_in at
/// angle (n-1)*60 degrees for n in 1..6.
inline TwoAxis vsi_voltage_vector(int n, double v_in) {
    // cos/sin of (n-1)*60 deg, exact constants
    static constexpr double kRoot3Over2 = 0.86602540378443864676;
    static constexpr double kCos[6] = {1.0, 0.5, -0.5, -1.0, -0.5, 0.5};
    static constexpr double kSin[6] = {0.0, kRoot3Over2, kRoot3Over2, 0.0, -kRoot3Over2,
                                       -kRoot3Over2};
    if (n < 0 || n > 7) throw std::out_of_range("vsi_voltage_vector: n must be in 0..7");
    if (n == 0 || n == 7) return {0.0, 0.0};
    const double mag = (2.0 / 3.0) * v_in;
    return {mag * kCos[n - 1], mag * kSin[n - 1]};
}

}  // namespace gridmpc
