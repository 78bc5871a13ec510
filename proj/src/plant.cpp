#include "gridmpc/plant.hpp"

#include <array>
#include <cmath>

#include "gridmpc/errors.hpp"
#include "gridmpc/integrate.hpp"
#include "gridmpc/svm.hpp"

namespace gridmpc {
namespace {

void check_finite_bound(double x, const char* what) {
    if (!(std::abs(x) < 1e9)) throw NumericalBlowup(std::string("plant state blew up: ") + what);
}

}  // namespace

DcSideState step_dc_side(const DcSideState& state, const DcSideParams& params, PvSwitch pv_switch,
                         BatteryPair bat_pair, double i_o, double p_dcload,
                         double pv_current_source, double dt) {
    const double s_pv = pv_switch == PvSwitch::kOn ? 1.0 : 0.0;
    const double s_bat1 = bat_pair == BatteryPair::kPair10 ? 1.0 : 0.0;

    const auto deriv = [&](const DcSideState& x) {
        DcSideState d;
        // Boost leg: switch ON shorts the inductor to ground, OFF feeds the bus
        // through the diode, which blocks once the current has run out.
        const bool blocked = s_pv == 0.0 && x.i_pv <= 0.0 && x.v_pv < x.v_dc;
        const double i_inductor = blocked ? 0.0 : x.i_pv;
        d.i_pv = blocked ? 0.0
                         : (x.v_pv - (1.0 - s_pv) * x.v_dc - params.R_parasitic * x.i_pv) /
                               params.L_PV;
        d.v_pv = (pv_current_source - i_inductor) / params.C_PV;
        d.i_bat = (params.V_bat - x.i_bat * params.R_bat - s_bat1 * x.v_dc) / params.L_bat;
        // Constant-power DC load; denominator guarded away from zero volts
        // where the load model has no meaning.
        const double v_bus = std::max(x.v_dc, 1.0);
        d.v_dc = ((1.0 - s_pv) * i_inductor + s_bat1 * x.i_bat - p_dcload / v_bus - i_o) /
                 params.C_bat;
        return d;
    };

    DcSideState next = rk4_step(state, deriv, dt);
    // Boost diode blocks reverse current.
    if (pv_switch == PvSwitch::kOff && next.i_pv < 0.0) next.i_pv = 0.0;
    next.i_o = i_o;

    check_finite_bound(next.v_pv, "v_pv");
    check_finite_bound(next.i_pv, "i_pv");
    check_finite_bound(next.i_bat, "i_bat");
    check_finite_bound(next.v_dc, "v_dc");
    return next;
}

void step_ac_side_applied(std::span<VsiState> states, std::span<const VsiParams> params,
                          std::span<const TwoAxis> applied_v, double z_ac, double dt) {
    const std::size_t m = states.size();

    using Bank = std::array<VsiState, kMaxVsis>;
    const auto deriv = [&](const Bank& x, Bank& d) {
        TwoAxis sum_it{};
        for (std::size_t j = 0; j < m; ++j) sum_it += x[j].i_t;
        const TwoAxis v_pcc = sum_it * z_ac;
        for (std::size_t j = 0; j < m; ++j) {
            const VsiParams& p = params[j];
            const double g_local = p.local_load_ohms ? 1.0 / *p.local_load_ohms : 0.0;
            d[j].i_f = (applied_v[j] - x[j].i_f * p.R_F - x[j].v_bus) * (1.0 / p.L_F);
            d[j].v_bus = (x[j].i_f - x[j].i_t - x[j].v_bus * g_local) * (1.0 / p.C_f);
            d[j].i_t = (x[j].v_bus - x[j].i_t * p.R_T - v_pcc) * (1.0 / p.L_T);
        }
    };

    Bank x{};
    for (std::size_t j = 0; j < m; ++j) x[j] = states[j];

    Bank k1{}, k2{}, k3{}, k4{}, tmp{};
    deriv(x, k1);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = x[j] + k1[j] * (0.5 * dt);
    deriv(tmp, k2);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = x[j] + k2[j] * (0.5 * dt);
    deriv(tmp, k3);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = x[j] + k3[j] * dt;
    deriv(tmp, k4);
    for (std::size_t j = 0; j < m; ++j) {
        states[j] = x[j] + (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (dt / 6.0);
        check_finite_bound(states[j].i_f.alpha, "i_f");
        check_finite_bound(states[j].v_bus.alpha, "v_bus");
        check_finite_bound(states[j].i_t.alpha, "i_t");
    }
}

std::vector<VsiState> step_ac_side(std::span<const VsiState> states,
                                   std::span<const VsiParams> params, std::span<const int> vectors,
                                   double z_ac, double dt) {
    std::vector<VsiState> next(states.begin(), states.end());
    std::array<TwoAxis, kMaxVsis> applied{};
    for (std::size_t j = 0; j < states.size(); ++j)
        applied[j] = vsi_voltage_vector(vectors[j], params[j].V_in);
    step_ac_side_applied(next, params, std::span<const TwoAxis>(applied.data(), states.size()),
                         z_ac, dt);
    return next;
}

TwoAxis pcc_voltage(std::span<const VsiState> states, double z_ac) {
    TwoAxis sum{};
    for (const VsiState& s : states) sum += s.i_t;
    return sum * z_ac;
}

PowerReport power_flows(const NetworkState& state, const DcSideParams& dc_params) {
    PowerReport r;
    r.p_pv = state.dc.v_pv * state.dc.i_pv;
    // Battery terminal power; discharge positive, charging negative.
    r.p_bat = (dc_params.V_bat - state.dc.i_bat * dc_params.R_bat) * state.dc.i_bat;
    r.p_dcload = state.p_dcload;
    r.p_vsi.reserve(state.vsis.size());
    r.q_vsi.reserve(state.vsis.size());
    for (const VsiState& s : state.vsis) {
        r.p_vsi.push_back(1.5 * s.v_bus.dot(s.i_t));
        // q = 3/2 (v_beta i_alpha - v_alpha i_beta), inductive positive
        r.q_vsi.push_back(1.5 * s.i_t.cross(s.v_bus));
    }
    const TwoAxis v_pcc = pcc_voltage(state.vsis, state.z_ac);
    r.p_pcc_load = 1.5 * v_pcc.norm2() / state.z_ac;
    return r;
}

}  // namespace gridmpc
