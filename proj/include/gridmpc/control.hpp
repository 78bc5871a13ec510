#pragma once

// The three FCS-MPC controllers: each samples the plant, predicts one step
// ahead for every member of its finite control set, and applies the argmin of
// its cost. Plus the droop baseline used for the frequency comparison.

#include <span>
#include <vector>

#include "gridmpc/frames.hpp"
#include "gridmpc/plant.hpp"
#include "gridmpc/svm.hpp"

namespace gridmpc {

struct ControlConfig {
    double T_S = 20e-6;              // sampling period, s
    double lambda = 0.5;             // tracking weight in [0,1]
    std::vector<double> betas;       // sharing ratios beta_1..beta_{m-1}
    double v_ref_peak = 311.0;       // PCC reference, phase-to-neutral peak V
    double v_ref_freq = 60.0;        // Hz
    double V_DC_ref = 800.0;         // DC bus setpoint, V
    bool joint_search = true;        // joint 8^m enumeration vs per-VSI sweep
    int actuation_delay = 0;         // 0 or 1 control periods
};

struct PvMeasurement {
    double v_pv_k = 0.0;    // V_PV(k)
    double v_pv_km1 = 0.0;  // V_PV(k-1)
    double i_pv_k = 0.0;    // I_PV(k)
    double p_mpp = 0.0;     // running maximum-power reference, W
};

struct DcMeasurement {
    double v_dc_k = 0.0;   // V_DC(k)
    double i_bat_k = 0.0;  // I_bat(k)
    double i_o_k = 0.0;    // net non-battery current leaving the bus, A
};

struct PvPrediction {
    double i_next = 0.0;
    double v_next = 0.0;
    double p_next = 0.0;
};

struct DcBusPrediction {
    double v_next_10 = 0.0;  // S = (1,0), battery coupled to the bus
    double v_next_01 = 0.0;  // S = (0,1), battery freewheeling
};

struct VsiPrediction {
    std::vector<VsiState> next;  // per-VSI x_i(k+1)
    TwoAxis v_pcc_next;
};

/// Boost-converter one-step prediction. ON ramps the inductor current by
/// (T_S/L_PV) V_PV(k); OFF holds it; the terminal voltage is linearly
/// extrapolated either way.
PvPrediction predict_pv(const PvMeasurement& meas, const ControlConfig& cfg, double L_PV,
                        PvSwitch sw);

/// Switch whose predicted |P(k+1) - P_MPP| is smaller; tie -> OFF.
PvSwitch select_pv_switch(const PvMeasurement& meas, const ControlConfig& cfg, double L_PV);

/// DC-bus one-step predictions for both battery gate pairs.
DcBusPrediction predict_dc_bus(const DcMeasurement& meas, const ControlConfig& cfg, double C_bat);

/// Gate pair whose predicted bus voltage is closer to V_DC_ref; tie -> (0,1).
BatteryPair select_battery_switches(const DcMeasurement& meas, const ControlConfig& cfg,
                                    double C_bat);

/// Cascaded one-step prediction for the whole VSI group under a given vector
/// choice: the filter-current row is advanced first, then the local-bus
/// voltage from the updated current, then the tie-line current from the
/// updated voltage. The network coupling term uses time-k tie currents, and
/// the local-bus output current i_oi(k) is the tie-line current plus any
/// local-load draw.
VsiPrediction predict_vsi_group(std::span<const VsiState> states,
                                std::span<const VsiParams> params, std::span<const int> choice,
                                double z_ac, const ControlConfig& cfg);

/// J = lambda ||v_ref - v_pcc(k+1)||^2
///   + (1-lambda) sum_j ||i_Fj(k+1) - beta_j i_F(j+1)(k+1)||^2
double vsi_cost(const VsiPrediction& pred, TwoAxis v_ref, const ControlConfig& cfg);

/// Argmin of vsi_cost over the full joint vector set (8^m candidates, ties ->
/// lexicographically smallest tuple). With cfg.joint_search false, each VSI
/// sweeps its own eight vectors while the others hold `previous`. Throws
/// ControlSetTooLarge when 8^m exceeds 1e6.
std::vector<int> select_vsi_vectors(std::span<const VsiState> states,
                                    std::span<const VsiParams> params, double z_ac, TwoAxis v_ref,
                                    const ControlConfig& cfg,
                                    std::span<const int> previous = {});

// ---------------------------------------------------------------------------
// Droop baseline
// ---------------------------------------------------------------------------

struct DroopConfig {
    double f0 = 60.0;    // Hz
    double E0 = 311.0;   // phase-to-neutral peak, V
    double m_p = 1e-5;   // Hz/W
    double n_q = 1e-4;   // V/var
    double power_filter_hz = 10.0;
};

struct DroopSetpoint {
    double frequency_hz = 60.0;
    double amplitude = 0.0;
    double phase = 0.0;
};

/// f = f0 - m_p P, E = E0 - n_q Q; the phase advances by 2*pi*f*dt from
/// phase_prev. The droop VSI runs as an averaged voltage source (no
/// switching).
DroopSetpoint droop_vsi_update(double p_filtered, double q_filtered, const DroopConfig& cfg,
                               double dt, double phase_prev);

}  // namespace gridmpc
