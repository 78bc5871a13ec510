#include "gridmpc/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gridmpc/errors.hpp"
#include "gridmpc/metrics.hpp"
#include "gridmpc/oscillator.hpp"

namespace gridmpc {

const char* to_string(ScenarioEvent::Kind kind) {
    switch (kind) {
        case ScenarioEvent::Kind::kDcLoadStep: return "dc_load_step";
        case ScenarioEvent::Kind::kPccLoadStep: return "pcc_load_step";
        case ScenarioEvent::Kind::kIrradianceStep: return "irradiance_step";
        case ScenarioEvent::Kind::kTemperatureStep: return "temperature_step";
        case ScenarioEvent::Kind::kBetaChange: return "beta_change";
        case ScenarioEvent::Kind::kVdcRefChange: return "vdc_ref_change";
    }
    return "unknown";
}

void apply_event(LiveParameters& live, const ScenarioEvent& event, double v_ref_peak) {
    switch (event.kind) {
        case ScenarioEvent::Kind::kDcLoadStep:
            live.p_dcload = event.value;
            break;
        case ScenarioEvent::Kind::kPccLoadStep:
            live.pcc_load_watts = event.value;
            live.z_ac = 1.5 * v_ref_peak * v_ref_peak / event.value;
            break;
        case ScenarioEvent::Kind::kIrradianceStep:
            live.irradiance = event.value;
            break;
        case ScenarioEvent::Kind::kTemperatureStep:
            live.temperature = event.value;
            break;
        case ScenarioEvent::Kind::kBetaChange: {
            const std::size_t i = static_cast<std::size_t>(event.index);
            if (i < 1 || i > live.betas.size())
                throw ConfigInvalid("beta_change index out of range: " + std::to_string(event.index));
            live.betas[i - 1] = event.value;
            break;
        }
        case ScenarioEvent::Kind::kVdcRefChange:
            live.v_dc_ref = event.value;
            break;
    }
}

void validate_config(const SimulationConfig& c) {
    const auto fail = [](const std::string& what) { throw ConfigInvalid(what); };

    if (c.duration < 0.0) fail("sim.duration must be >= 0");
    if (c.dt <= 0.0) fail("sim.dt must be > 0");
    if (c.control.T_S <= 0.0) fail("control.T_S must be > 0");
    const double ratio = c.control.T_S / c.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
        fail("sim.dt must divide control.T_S exactly");
    if (c.control.lambda < 0.0 || c.control.lambda > 1.0) fail("control.lambda must be in [0,1]");
    if (c.vsis.empty()) fail("at least one VSI required (sim.vsi_count >= 1)");
    if (c.vsis.size() > kMaxVsis) fail("sim.vsi_count must be <= 8");
    if (c.control.betas.size() + 1 != c.vsis.size())
        fail("control.beta count must be vsi_count - 1");
    for (double b : c.control.betas)
        if (!(b > 0.0)) fail("control.beta values must be > 0");
    if (c.control.v_ref_peak <= 0.0) fail("control.v_ref_peak must be > 0");
    if (c.control.v_ref_freq <= 0.0) fail("control.v_ref_freq must be > 0");
    if (c.control.actuation_delay != 0 && c.control.actuation_delay != 1)
        fail("control.actuation_delay must be 0 or 1");

    for (std::size_t j = 0; j < c.vsis.size(); ++j) {
        const VsiParams& p = c.vsis[j];
        const std::string tag = "vsi." + std::to_string(j + 1) + ".";
        if (p.L_F <= 0.0) fail(tag + "L_F must be > 0");
        if (p.C_f <= 0.0) fail(tag + "C_f must be > 0");
        if (p.L_T <= 0.0) fail(tag + "L_T must be > 0");
        if (p.V_in <= 0.0) fail(tag + "V_in must be > 0");
        if (p.local_load_ohms && *p.local_load_ohms <= 0.0)
            fail(tag + "local_load_ohms must be > 0");
    }
    if (!c.ac_only) {
        if (c.dc.L_PV <= 0.0) fail("dc.L_PV must be > 0");
        if (c.dc.C_PV <= 0.0) fail("dc.C_PV must be > 0");
        if (c.dc.L_bat <= 0.0) fail("dc.L_bat must be > 0");
        if (c.dc.C_bat <= 0.0) fail("dc.C_bat must be > 0");
        if (c.dc.V_bat <= 0.0) fail("dc.V_bat must be > 0");
        if (c.pv.I_sc_stc <= 0.0) fail("pv.I_sc_stc must be > 0");
        if (c.pv.V_oc_stc <= 0.0) fail("pv.V_oc_stc must be > 0");
        if (c.mppt_period_steps < 1) fail("mppt.period_steps must be >= 1");
    }
    if (c.droop_mode && !c.ac_only)
        fail("droop_mode requires ac_only (the droop baseline runs the AC subsystem only)");
    if (c.pcc_load_watts <= 0.0) fail("sim.pcc_load_watts must be > 0");
    if (c.trace_decimation < 1) fail("sim.trace_decimation must be >= 1");

    double prev_time = 0.0;
    for (const ScenarioEvent& e : c.events) {
        if (e.time < 0.0) fail("event time must be >= 0");
        if (e.time < prev_time) fail("events must be sorted by time");
        prev_time = e.time;
        if (e.kind == ScenarioEvent::Kind::kBetaChange) {
            if (e.index < 1 || static_cast<std::size_t>(e.index) > c.control.betas.size())
                fail("beta_change index out of range");
            if (!(e.value > 0.0)) fail("beta_change value must be > 0");
        } else if (e.kind != ScenarioEvent::Kind::kTemperatureStep && !(e.value > 0.0)) {
            fail(std::string(to_string(e.kind)) + " value must be > 0");
        }
    }
}

namespace {

struct DroopVsiState {
    double phase = 0.0;
    LowPassFilter p_filter;
    LowPassFilter q_filter;
    double frequency_hz = 60.0;
    double amplitude = 0.0;
};

}  // namespace

RunResult run(const SimulationConfig& config) {
    validate_config(config);

    const std::size_t m = config.vsis.size();
    const int ratio = static_cast<int>(std::round(config.control.T_S / config.dt));
    const long n_ctrl = std::lround(config.duration / config.control.T_S);
    const double t_s = config.control.T_S;
    const double dt = config.dt;

    ControlConfig ctrl = config.control;
    std::vector<VsiParams> vsi_params = config.vsis;

    LiveParameters live;
    live.p_dcload = config.p_dcload;
    live.pcc_load_watts = config.pcc_load_watts;
    live.z_ac = 1.5 * ctrl.v_ref_peak * ctrl.v_ref_peak / config.pcc_load_watts;
    live.irradiance = config.irradiance;
    live.temperature = config.temperature;
    live.betas = ctrl.betas;
    live.v_dc_ref = ctrl.V_DC_ref;

    // Startup: bus pre-charged to the setpoint, PV at 0.8 V_oc, AC at rest.
    NetworkState net;
    net.z_ac = live.z_ac;
    net.p_dcload = live.p_dcload;
    net.irradiance = live.irradiance;
    net.temperature = live.temperature;
    net.vsis.assign(m, VsiState{});
    net.dc.v_dc = ctrl.V_DC_ref;
    net.dc.v_pv = 0.8 * config.pv.V_oc_stc;
    net.dc.i_pv =
        config.ac_only
            ? 0.0
            : pv_array_current(net.dc.v_pv, live.irradiance, live.temperature, config.pv);
    net.dc.i_bat = 0.0;

    MpptOptions mppt_opt = config.mppt;
    mppt_opt.v_max = config.pv.V_oc_stc;
    MpptState mppt;
    // Seed one virtual prior step so the first IncCond update sees a gradient.
    mppt.v_prev = net.dc.v_pv - mppt_opt.step_volts;
    mppt.i_prev = config.ac_only ? 0.0
                                 : pv_array_current(mppt.v_prev, live.irradiance,
                                                    live.temperature, config.pv);
    mppt.v_target = net.dc.v_pv;
    mppt.p_mpp_estimate = net.dc.v_pv * net.dc.i_pv;

    const ReferenceOscillator osc{ctrl.v_ref_freq, ctrl.v_ref_peak, 0.0};

    // Reported-signal smoothing at 100 Hz (plant cadence).
    LowPassFilter p_pv_f(100.0, dt), p_bat_f(100.0, dt), v_pcc_mag_f(100.0, dt);
    p_pv_f.reset(net.dc.v_pv * net.dc.i_pv);
    std::vector<LowPassFilter> p_vsi_f(m, LowPassFilter(100.0, dt));

    const double freq_window = 5.0 / ctrl.v_ref_freq;
    const double freq_hyst = 0.05 * ctrl.v_ref_peak;  // ride through switching ripple
    FrequencyTracker f_pcc_tracker(freq_window, freq_hyst);
    std::vector<FrequencyTracker> f_bus_tracker(m, FrequencyTracker(freq_window, freq_hyst));
    // Pre-filters take the switching ripple out of the crossing interpolation.
    LowPassFilter f_pcc_prefilter(1500.0, dt);
    std::vector<LowPassFilter> f_bus_prefilter(m, LowPassFilter(1500.0, dt));
    // Smoothed inputs for the battery envelope's feedforward; the raw samples
    // still feed the Eq. (14)-(15) argmin. The slow bus filter keeps envelope
    // wander out of the reported battery power.
    LowPassFilter i_o_filter(1000.0, t_s);
    LowPassFilter v_dc_slow(30.0, t_s);
    v_dc_slow.reset(ctrl.V_DC_ref);

    std::vector<DroopVsiState> droop_states;
    if (config.droop_mode) {
        droop_states.resize(m);
        for (DroopVsiState& d : droop_states) {
            d.p_filter = LowPassFilter(config.droop.power_filter_hz, dt);
            d.q_filter = LowPassFilter(config.droop.power_filter_hz, dt);
            d.amplitude = config.droop.E0;
            d.frequency_hz = config.droop.f0;
        }
    }

    // Event snap indices (nearest control instant).
    std::vector<long> event_step(config.events.size());
    for (std::size_t e = 0; e < config.events.size(); ++e)
        event_step[e] = std::lround(config.events[e].time / t_s);

    RunResult result;
    result.trace_dt = t_s * config.trace_decimation;
    result.trace.reserve(static_cast<std::size_t>(n_ctrl / config.trace_decimation + 1));

    PvSwitch pv_switch = PvSwitch::kOff;
    BatteryPair bat_pair = BatteryPair::kPair01;
    std::vector<int> selected(m, 0), applied(m, 0), pending(m, 0);
    double v_pv_prev_ctrl = net.dc.v_pv;
    std::size_t next_event = 0;

    // Ripple-averaged PV samples for the slow IncCond update.
    double mppt_v_acc = 0.0, mppt_i_acc = 0.0;
    long mppt_acc_n = 0;

    const auto bus_guard = [](double v) { return std::max(v, 1.0); };

    for (long k = 0; k < n_ctrl; ++k) {
        const double t = static_cast<double>(k) * t_s;

        while (next_event < config.events.size() && event_step[next_event] <= k) {
            apply_event(live, config.events[next_event], ctrl.v_ref_peak);
            ctrl.betas = live.betas;
            ctrl.V_DC_ref = live.v_dc_ref;
            net.z_ac = live.z_ac;
            net.p_dcload = live.p_dcload;
            net.irradiance = live.irradiance;
            net.temperature = live.temperature;
            ++next_event;
        }

        // --- controller instant k: measurements, MPPT, three selections ---
        const double v_pv = net.dc.v_pv;
        const double i_pv = net.dc.i_pv;
        const double v_dc = net.dc.v_dc;

        double p_mpp = 0.0;
        if (!config.ac_only) {
            if (k % config.mppt_period_steps == 0 && mppt_acc_n > 0) {
                // Ripple-averaged samples accumulated at plant rate.
                mppt = mppt_step(mppt, mppt_v_acc / mppt_acc_n, mppt_i_acc / mppt_acc_n, mppt_opt);
                mppt_v_acc = mppt_i_acc = 0.0;
                mppt_acc_n = 0;
            }
            update_power_estimate(mppt, v_pv, i_pv, mppt_opt);
            p_mpp = power_reference(mppt, v_pv, mppt_opt);

            const PvMeasurement pv_meas{v_pv, v_pv_prev_ctrl, i_pv, p_mpp};
            pv_switch = select_pv_switch(pv_meas, ctrl, config.dc.L_PV);
        }
        v_pv_prev_ctrl = v_pv;

        if (!config.droop_mode) {
            if (!config.ac_only) vsi_params[0].V_in = v_dc;
            const TwoAxis v_ref = oscillator_reference(osc, t + t_s);
            selected = select_vsi_vectors(net.vsis, vsi_params, net.z_ac, v_ref, ctrl, applied);
            if (ctrl.actuation_delay == 1) {
                applied = pending;
                pending = selected;
            } else {
                applied = selected;
            }
        }

        if (!config.ac_only) {
            const TwoAxis v_bridge1 = vsi_voltage_vector(applied[0], v_dc);
            const double i_vsi_draw = 1.5 * v_bridge1.dot(net.vsis[0].i_f) / bus_guard(v_dc);
            const double diode_in = pv_switch == PvSwitch::kOff ? i_pv : 0.0;
            const double i_o_meas = net.p_dcload / bus_guard(v_dc) + i_vsi_draw - diode_in;
            const DcMeasurement dc_meas{v_dc, net.dc.i_bat, i_o_meas};
            bat_pair = select_battery_switches(dc_meas, ctrl, config.dc.C_bat);
            // Current-band envelope around the argmin. Eqs. (14)-(15) compare
            // bus-voltage predictions with the inductor current frozen, so the
            // leg can latch into freewheel with the bus high (it can never
            // initiate charging) and nothing bounds the current magnitude.
            // Hold the inductor current inside a band around the value that
            // balances the bus; inside the band the argmin governs.
            constexpr double kAmpsPerVolt = 4.0;   // bus-error to current gain
            constexpr double kCurrentBand = 2.0;   // A; ripple rides it at ~12 kHz
            constexpr double kCurrentLimit = 200.0;
            const double i_balance =
                i_o_filter.step(i_o_meas) * v_dc / config.dc.V_bat;  // duty-referred
            const double i_target =
                std::clamp(kAmpsPerVolt * (ctrl.V_DC_ref - v_dc_slow.step(v_dc)) + i_balance,
                           -kCurrentLimit, kCurrentLimit);
            if (net.dc.i_bat > i_target + kCurrentBand)
                bat_pair = BatteryPair::kPair10;  // coupled leg ramps the current down
            else if (net.dc.i_bat < i_target - kCurrentBand)
                bat_pair = BatteryPair::kPair01;  // freewheel ramps it up
        }

        if (k % config.trace_decimation == 0) {
            TraceRow row;
            row.t = t;
            row.v_dc = config.ac_only ? vsi_params[0].V_in : net.dc.v_dc;
            row.v_pv = net.dc.v_pv;
            row.i_pv = net.dc.i_pv;
            row.p_pv = p_pv_f.value();
            row.p_bat = p_bat_f.value();
            row.p_dcload = config.ac_only ? 0.0 : net.p_dcload;
            row.p_vsi.resize(m);
            for (std::size_t j = 0; j < m; ++j) row.p_vsi[j] = p_vsi_f[j].value();
            row.v_pcc_rms = v_pcc_mag_f.value() / std::numbers::sqrt2;
            row.f_pcc = f_pcc_tracker.frequency().value_or(0.0);
            row.f_bus.resize(m);
            for (std::size_t j = 0; j < m; ++j)
                row.f_bus[j] = f_bus_tracker[j].frequency().value_or(0.0);
            row.chosen_vectors.assign(m, -1);
            if (!config.droop_mode) row.chosen_vectors = applied;
            row.pv_switch = pv_switch == PvSwitch::kOn ? 1 : 0;
            row.bat_switch = bat_pair == BatteryPair::kPair10 ? 1 : 0;
            result.trace.push_back(std::move(row));
        }

        // --- plant: `ratio` RK4 substeps under zero-order-held commands ---
        std::array<TwoAxis, kMaxVsis> bridge{};
        for (int s = 0; s < ratio; ++s) {
            const double v_dc_now = net.dc.v_dc;
            for (std::size_t j = 0; j < m; ++j) {
                if (config.droop_mode) {
                    DroopVsiState& d = droop_states[j];
                    bridge[j] = {d.amplitude * std::cos(d.phase), d.amplitude * std::sin(d.phase)};
                } else {
                    const double v_in =
                        (j == 0 && !config.ac_only) ? v_dc_now : vsi_params[j].V_in;
                    bridge[j] = vsi_voltage_vector(applied[j], v_in);
                }
            }

            double i_o_now = 0.0;
            double i_array = 0.0;
            if (!config.ac_only) {
                i_o_now = 1.5 * bridge[0].dot(net.vsis[0].i_f) / bus_guard(v_dc_now);
                i_array = pv_array_current(net.dc.v_pv, net.irradiance, net.temperature, config.pv);
            }

            try {
                step_ac_side_applied(net.vsis, vsi_params,
                                     std::span<const TwoAxis>(bridge.data(), m), net.z_ac, dt);
                if (!config.ac_only)
                    net.dc = step_dc_side(net.dc, config.dc, pv_switch, bat_pair, i_o_now,
                                          net.p_dcload, i_array, dt);
            } catch (const NumericalBlowup& b) {
                throw NumericalBlowup(std::string(b.what()) + " at t=" + std::to_string(t), t);
            }

            const double t_sub = t + static_cast<double>(s + 1) * dt;
            if (!config.ac_only) {
                mppt_v_acc += net.dc.v_pv;
                mppt_i_acc += net.dc.i_pv;
                ++mppt_acc_n;
            }
            const PowerReport pw = power_flows(net, config.dc);
            p_pv_f.step(pw.p_pv);
            p_bat_f.step(pw.p_bat);
            for (std::size_t j = 0; j < m; ++j) p_vsi_f[j].step(pw.p_vsi[j]);
            const TwoAxis v_pcc = pcc_voltage(net.vsis, net.z_ac);
            v_pcc_mag_f.step(v_pcc.norm());
            f_pcc_tracker.feed(t_sub, f_pcc_prefilter.step(v_pcc.alpha));
            for (std::size_t j = 0; j < m; ++j)
                f_bus_tracker[j].feed(t_sub, f_bus_prefilter[j].step(net.vsis[j].v_bus.alpha));

            if (config.droop_mode) {
                for (std::size_t j = 0; j < m; ++j) {
                    DroopVsiState& d = droop_states[j];
                    const double p_inst = pw.p_vsi[j];
                    const double q_inst = pw.q_vsi[j];
                    const DroopSetpoint sp = droop_vsi_update(
                        d.p_filter.step(p_inst), d.q_filter.step(q_inst), config.droop, dt,
                        d.phase);
                    d.phase = sp.phase;
                    d.frequency_hz = sp.frequency_hz;
                    d.amplitude = sp.amplitude;
                }
            }
        }
        ++result.control_invocations;
    }

    result.final_state = net;
    return result;
}

}  // namespace gridmpc
