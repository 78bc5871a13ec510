#pragma once

// Continuous-time ground-truth circuit models, integrated with RK4 under
// zero-order-hold switch commands. The controllers' one-step predictions are
// judged against these.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gridmpc/frames.hpp"

namespace gridmpc {

constexpr std::size_t kMaxVsis = 8;

enum class PvSwitch { kOff = 0, kOn = 1 };

/// Gate pair of the battery half-bridge; the two signals are complementary.
/// kPair10 couples the battery inductor to the DC bus, kPair01 freewheels it.
enum class BatteryPair { kPair01 = 0, kPair10 = 1 };

struct DcSideParams {
    double L_PV = 1e-3;        // boost inductor, H
    double C_PV = 100e-6;      // PV terminal capacitor, F
    double L_bat = 5e-3;       // battery inductor, H
    double C_bat = 5e-3;       // DC-bus capacitor, F
    double R_parasitic = 0.0;  // boost-loop series resistance, ohms
    double V_bat = 600.0;      // battery EMF, V
    double R_bat = 0.05;       // battery series resistance, ohms
    double V_DC_ref = 800.0;   // bus setpoint, V
};

struct VsiParams {
    double R_F = 0.1;     // filter resistance, ohms
    double L_F = 5e-3;    // filter inductance, H
    double C_f = 8e-6;    // local-bus capacitor, F
    double R_T = 0.05;    // tie-line resistance, ohms
    double L_T = 0.25e-3; // tie-line inductance, H
    double V_in = 800.0;  // DC input voltage, V (VSI 1 tracks the live bus)
    std::optional<double> local_load_ohms;  // absent = no local load
};

struct DcSideState {
    double v_pv = 0.0;   // PV terminal voltage, V
    double i_pv = 0.0;   // boost inductor current, A
    double i_bat = 0.0;  // battery inductor current, A (positive discharging)
    double v_dc = 0.0;   // DC bus voltage, V
    double i_o = 0.0;    // instantaneous VSI-1 draw, A (recorded, not integrated)

    DcSideState operator+(const DcSideState& r) const {
        return {v_pv + r.v_pv, i_pv + r.i_pv, i_bat + r.i_bat, v_dc + r.v_dc, i_o};
    }
    DcSideState operator*(double s) const { return {v_pv * s, i_pv * s, i_bat * s, v_dc * s, i_o}; }
};

/// Per-inverter state x_i = [i_F, v_Bus, i_T] in the alpha-beta frame.
struct VsiState {
    TwoAxis i_f;    // filter current, A
    TwoAxis v_bus;  // local AC bus voltage, V
    TwoAxis i_t;    // tie-line current into the PCC, A

    VsiState operator+(const VsiState& r) const {
        return {i_f + r.i_f, v_bus + r.v_bus, i_t + r.i_t};
    }
    VsiState operator*(double s) const { return {i_f * s, v_bus * s, i_t * s}; }
};

struct NetworkState {
    DcSideState dc;
    std::vector<VsiState> vsis;
    double z_ac = 6.448;       // PCC load, ohms (resistive)
    double p_dcload = 21500.0; // constant-power DC load, W
    double irradiance = 1000.0;
    double temperature = 25.0;
};

struct PowerReport {
    double p_pv = 0.0;       // W
    double p_bat = 0.0;      // W, negative = charging
    double p_dcload = 0.0;   // W
    std::vector<double> p_vsi;  // per-VSI real output power, W
    std::vector<double> q_vsi;  // per-VSI reactive output power, var
    double p_pcc_load = 0.0; // W
};

/// One RK4 step of the DC-side circuit with frozen switch commands.
/// pv_current_source is the array current held over the step; i_o the VSI-1
/// bus draw. Throws NumericalBlowup when a state exceeds 1e9 in magnitude.
DcSideState step_dc_side(const DcSideState& state, const DcSideParams& params, PvSwitch pv_switch,
                         BatteryPair bat_pair, double i_o, double p_dcload,
                         double pv_current_source, double dt);

/// One RK4 step of the whole AC network with frozen applied bridge voltages
/// (general form; droop mode feeds continuous voltages through it).
void step_ac_side_applied(std::span<VsiState> states, std::span<const VsiParams> params,
                          std::span<const TwoAxis> applied_v, double z_ac, double dt);

/// Convenience wrapper mapping SVM vector indices to bridge voltages.
std::vector<VsiState> step_ac_side(std::span<const VsiState> states,
                                   std::span<const VsiParams> params, std::span<const int> vectors,
                                   double z_ac, double dt);

/// v_PCC = Z_AC * sum of tie-line currents.
TwoAxis pcc_voltage(std::span<const VsiState> states, double z_ac);

/// Instantaneous power flows (amplitude-invariant convention: p = 3/2 v.i).
PowerReport power_flows(const NetworkState& state, const DcSideParams& dc_params);

}  // namespace gridmpc
