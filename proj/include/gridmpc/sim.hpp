#pragma once

// Closed-loop orchestration: plant at dt, controllers at T_S, MPPT at its own
// cadence, scenario events snapped to control instants.

#include <vector>

#include "gridmpc/scenario.hpp"

namespace gridmpc {

struct RunResult {
    std::vector<TraceRow> trace;
    NetworkState final_state;
    int control_invocations = 0;
    double trace_dt = 0.0;  // seconds between trace rows
};

/// Mutable scenario knobs an event may touch.
struct LiveParameters {
    double p_dcload = 0.0;
    double pcc_load_watts = 0.0;
    double z_ac = 0.0;
    double irradiance = 0.0;
    double temperature = 0.0;
    std::vector<double> betas;
    double v_dc_ref = 0.0;
};

/// Apply one event to the live parameter set. PccLoadStep recomputes Z_AC from
/// the requested power at nominal PCC voltage.
void apply_event(LiveParameters& live, const ScenarioEvent& event, double v_ref_peak);

/// Run the scenario. Throws ConfigInvalid on a malformed config and
/// NumericalBlowup (with the offending time) if the plant diverges. Identical
/// configs produce bit-identical traces.
RunResult run(const SimulationConfig& config);

/// Validate without running; throws ConfigInvalid naming the offending field.
void validate_config(const SimulationConfig& config);

}  // namespace gridmpc
