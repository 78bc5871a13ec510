#pragma once

// Scenario description: timed parameter changes and the logged output record.

#include <string>
#include <vector>

#include "gridmpc/control.hpp"
#include "gridmpc/mppt.hpp"
#include "gridmpc/plant.hpp"
#include "gridmpc/pv.hpp"

namespace gridmpc {

struct ScenarioEvent {
    enum class Kind {
        kDcLoadStep,      // value = new DC load, W
        kPccLoadStep,     // value = new total PCC load, W (Z_AC recomputed)
        kIrradianceStep,  // value = W/m^2
        kTemperatureStep, // value = C
        kBetaChange,      // index = 1-based ratio index, value = new beta
        kVdcRefChange,    // value = new bus setpoint, V
    };

    double time = 0.0;
    Kind kind = Kind::kDcLoadStep;
    double value = 0.0;
    int index = 0;  // used by kBetaChange
};

const char* to_string(ScenarioEvent::Kind kind);

struct SimulationConfig {
    double duration = 1.0;   // s
    double dt = 2e-6;        // plant step; must divide control.T_S exactly
    ControlConfig control;
    DcSideParams dc;
    std::vector<VsiParams> vsis;   // one per inverter
    PvArrayParams pv;
    MpptOptions mppt;
    int mppt_period_steps = 100;   // control periods between MPPT updates
    bool droop_mode = false;       // droop baseline instead of FCS-MPC VSIs
    DroopConfig droop;
    bool ac_only = false;          // stiff DC sources, no PV/battery loop
    std::vector<ScenarioEvent> events;  // sorted by time
    long seed = 0;                 // reserved; the simulation is deterministic
    int trace_decimation = 10;     // control periods per trace row

    double p_dcload = 21500.0;        // initial DC load, W
    double pcc_load_watts = 22500.0;  // initial PCC load, W (sizes Z_AC)
    double irradiance = 1000.0;       // W/m^2
    double temperature = 25.0;        // C

    std::size_t vsi_count() const { return vsis.size(); }
};

struct TraceRow {
    double t = 0.0;
    double v_dc = 0.0;
    double v_pv = 0.0;
    double i_pv = 0.0;
    double p_pv = 0.0;
    double p_bat = 0.0;
    double p_dcload = 0.0;
    std::vector<double> p_vsi;
    double v_pcc_rms = 0.0;
    double f_pcc = 0.0;
    std::vector<double> f_bus;
    std::vector<int> chosen_vectors;  // -1 in droop mode (averaged source)
    int pv_switch = 0;
    int bat_switch = 0;  // s_bat1
};

}  // namespace gridmpc
