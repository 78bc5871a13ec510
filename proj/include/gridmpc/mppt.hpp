#pragma once

// Incremental-conductance MPPT. The hill climber moves a target voltage; the
// exported running power reference P_MPP anchors the PV power controller to
// that target using measured quantities only.

#include <algorithm>

namespace gridmpc {

struct MpptState {
    double v_prev = 0.0;          // volts, sample at the previous MPPT step
    double i_prev = 0.0;          // amps
    double p_mpp_estimate = 0.0;  // watts, low-pass-filtered v*i
    double v_target = 0.0;        // volts, hill-climb target
};

struct MpptOptions {
    double step_volts = 0.5;
    double epsilon_volts = 0.01;       // |dV| below this counts as "no move"
    double conductance_tol = 5e-4;     // A/V, at-MPP dead band on dI/dV + I/V
    double v_max = 700.0;              // open-circuit clamp for v_target
    double power_filter_alpha = 0.02;  // per control period, ~1 ms at 20 us
    double anchor_gain = 150.0;        // W/V, pull of v_target on the reference
};

/// One incremental-conductance update (runs at the slow MPPT cadence).
/// Compares dI/dV against -I/V and moves v_target one step toward the MPP;
/// with |dV| below epsilon the direction falls back to the sign of dI.
inline MpptState mppt_step(const MpptState& state, double v, double i, const MpptOptions& opt) {
    MpptState next = state;
    const double dv = v - state.v_prev;
    const double di = i - state.i_prev;

    double direction = 0.0;
    if (std::abs(dv) < opt.epsilon_volts) {
        if (di > 0.0)
            direction = 1.0;
        else if (di < 0.0)
            direction = -1.0;
    } else {
        // sign(dP/dV) = sign(dI/dV + I/V) for v > 0
        const double mismatch = di / dv + (v > 0.0 ? i / v : 0.0);
        if (mismatch > opt.conductance_tol)
            direction = 1.0;
        else if (mismatch < -opt.conductance_tol)
            direction = -1.0;
    }

    next.v_target = std::clamp(state.v_target + direction * opt.step_volts, 0.0, opt.v_max);
    next.v_prev = v;
    next.i_prev = i;
    return next;
}

/// Fast-cadence update of the filtered power estimate (every control period).
inline void update_power_estimate(MpptState& state, double v, double i, const MpptOptions& opt) {
    state.p_mpp_estimate += opt.power_filter_alpha * (v * i - state.p_mpp_estimate);
}

/// Running power reference handed to the PV controller. Equals the filtered
/// measured power once v has converged to v_target; away from the target the
/// anchor term steers the operating point toward it from either side of the
/// MPP.
inline double power_reference(const MpptState& state, double v, const MpptOptions& opt) {
    return std::max(0.0, state.p_mpp_estimate + opt.anchor_gain * (v - state.v_target));
}

}  // namespace gridmpc
