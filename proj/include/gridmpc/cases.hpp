#pragma once

// Built-in scenario configs reproducing the three case studies and the droop
// frequency comparison.

#include <utility>

#include "gridmpc/scenario.hpp"

namespace gridmpc {

/// Two-inverter baseline: 22.5 kW PCC load shared 1:2, 21.5 kW DC load, full
/// DC side active.
SimulationConfig default_config();

/// DC power balance: DC load 21.5 -> 13 kW at 0.5 s, irradiance drop at 0.7 s
/// sized so the PV maximum power falls from 35 kW to 32 kW.
SimulationConfig case1_config();

/// Power sharing: PCC load +10.5 kW at 0.5 s, -6.6 kW at 0.8 s, beta_1 = 1/2.
SimulationConfig case2_config();

/// Sharing-ratio change: beta_1 1/2 -> 8/7 at 0.4 s.
SimulationConfig case3_config();

/// AC-only pair under the case-2 events: {FCS-MPC, droop baseline}.
std::pair<SimulationConfig, SimulationConfig> droop_compare_configs();

}  // namespace gridmpc
