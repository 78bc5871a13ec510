#include "gridmpc/cases.hpp"

#include "gridmpc/pv.hpp"

namespace gridmpc {

SimulationConfig default_config() {
    SimulationConfig c;
    c.duration = 1.0;
    c.dt = 2e-6;
    c.control.T_S = 20e-6;
    c.control.betas = {0.5};
    c.vsis.assign(2, VsiParams{});
    c.dc.V_DC_ref = c.control.V_DC_ref;
    c.mppt.v_max = c.pv.V_oc_stc;
    c.p_dcload = 21500.0;
    c.pcc_load_watts = 22500.0;
    return c;
}

SimulationConfig case1_config() {
    SimulationConfig c = default_config();
    c.duration = 1.0;
    const double g_32kw = irradiance_for_power(32000.0, c.temperature, c.pv);
    c.events = {
        {0.5, ScenarioEvent::Kind::kDcLoadStep, 13000.0, 0},
        {0.7, ScenarioEvent::Kind::kIrradianceStep, g_32kw, 0},
    };
    return c;
}

SimulationConfig case2_config() {
    SimulationConfig c = default_config();
    c.duration = 1.1;
    c.events = {
        {0.5, ScenarioEvent::Kind::kPccLoadStep, 33000.0, 0},
        {0.8, ScenarioEvent::Kind::kPccLoadStep, 26400.0, 0},
    };
    return c;
}

SimulationConfig case3_config() {
    SimulationConfig c = default_config();
    c.duration = 0.8;
    c.events = {
        {0.4, ScenarioEvent::Kind::kBetaChange, 8.0 / 7.0, 1},
    };
    return c;
}

std::pair<SimulationConfig, SimulationConfig> droop_compare_configs() {
    SimulationConfig mpc = case2_config();
    mpc.ac_only = true;
    SimulationConfig droop = mpc;
    droop.droop_mode = true;
    return {mpc, droop};
}

}  // namespace gridmpc
