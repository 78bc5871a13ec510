#include "gridmpc/control.hpp"

#include <array>
#include <cmath>
#include <cstdint>

#include "gridmpc/errors.hpp"
#include "gridmpc/kernels/cost_scan.hpp"
#include "gridmpc/oscillator.hpp"

namespace gridmpc {

PvPrediction predict_pv(const PvMeasurement& meas, const ControlConfig& cfg, double L_PV,
                        PvSwitch sw) {
    PvPrediction p;
    p.i_next = sw == PvSwitch::kOn ? meas.i_pv_k + (cfg.T_S / L_PV) * meas.v_pv_k : meas.i_pv_k;
    p.v_next = 2.0 * meas.v_pv_k - meas.v_pv_km1;
    p.p_next = p.i_next * p.v_next;
    return p;
}

PvSwitch select_pv_switch(const PvMeasurement& meas, const ControlConfig& cfg, double L_PV) {
    const double j_on = std::abs(predict_pv(meas, cfg, L_PV, PvSwitch::kOn).p_next - meas.p_mpp);
    const double j_off = std::abs(predict_pv(meas, cfg, L_PV, PvSwitch::kOff).p_next - meas.p_mpp);
    // Tie -> OFF (fewer switching events).
    return j_on < j_off ? PvSwitch::kOn : PvSwitch::kOff;
}

DcBusPrediction predict_dc_bus(const DcMeasurement& meas, const ControlConfig& cfg, double C_bat) {
    const double k = cfg.T_S / C_bat;
    return {meas.v_dc_k + k * (meas.i_bat_k - meas.i_o_k), meas.v_dc_k - k * meas.i_o_k};
}

BatteryPair select_battery_switches(const DcMeasurement& meas, const ControlConfig& cfg,
                                    double C_bat) {
    const DcBusPrediction p = predict_dc_bus(meas, cfg, C_bat);
    const double j_10 = std::abs(cfg.V_DC_ref - p.v_next_10);
    const double j_01 = std::abs(cfg.V_DC_ref - p.v_next_01);
    // Tie -> (0,1).
    return j_10 < j_01 ? BatteryPair::kPair10 : BatteryPair::kPair01;
}

namespace {

// Affine decomposition of the cascaded one-step update for one inverter:
// x(k+1) = base + gain * V_n, with the same gains on both axes.
struct CandidateBasis {
    TwoAxis if0, vb0, it0;
    double k1, k2, k3;
};

CandidateBasis candidate_basis(const VsiState& x, const VsiParams& p, double z_ac,
                               TwoAxis sum_it_k, const ControlConfig& cfg) {
    CandidateBasis b;
    b.k1 = cfg.T_S / p.L_F;
    b.if0 = x.i_f + (x.i_f * (-p.R_F) - x.v_bus) * b.k1;

    const double g_local = p.local_load_ohms ? 1.0 / *p.local_load_ohms : 0.0;
    const TwoAxis i_o = x.i_t + x.v_bus * g_local;  // total current leaving local bus i
    const double kc = cfg.T_S / p.C_f;
    b.vb0 = x.v_bus + (b.if0 - i_o) * kc;
    b.k2 = kc * b.k1;

    const double kt = cfg.T_S / p.L_T;
    b.it0 = x.i_t + (b.vb0 - x.i_t * p.R_T - sum_it_k * z_ac) * kt;
    b.k3 = kt * b.k2;
    return b;
}

TwoAxis sum_tie_currents(std::span<const VsiState> states) {
    TwoAxis s{};
    for (const VsiState& x : states) s += x.i_t;
    return s;
}

}  // namespace

VsiPrediction predict_vsi_group(std::span<const VsiState> states,
                                std::span<const VsiParams> params, std::span<const int> choice,
                                double z_ac, const ControlConfig& cfg) {
    const std::size_t m = states.size();
    const TwoAxis sum_it_k = sum_tie_currents(states);

    VsiPrediction pred;
    pred.next.resize(m);
    TwoAxis sum_it_next{};
    for (std::size_t j = 0; j < m; ++j) {
        const CandidateBasis b = candidate_basis(states[j], params[j], z_ac, sum_it_k, cfg);
        const TwoAxis v_n = vsi_voltage_vector(choice[j], params[j].V_in);
        VsiState& nx = pred.next[j];
        nx.i_f = {b.if0.alpha + b.k1 * v_n.alpha, b.if0.beta + b.k1 * v_n.beta};
        nx.v_bus = {b.vb0.alpha + b.k2 * v_n.alpha, b.vb0.beta + b.k2 * v_n.beta};
        nx.i_t = {b.it0.alpha + b.k3 * v_n.alpha, b.it0.beta + b.k3 * v_n.beta};
        sum_it_next += nx.i_t;
    }
    pred.v_pcc_next = {z_ac * sum_it_next.alpha, z_ac * sum_it_next.beta};
    return pred;
}

double vsi_cost(const VsiPrediction& pred, TwoAxis v_ref, const ControlConfig& cfg) {
    const double e_a = v_ref.alpha - pred.v_pcc_next.alpha;
    const double e_b = v_ref.beta - pred.v_pcc_next.beta;
    const double track = e_a * e_a + e_b * e_b;

    double share = 0.0;
    for (std::size_t j = 0; j + 1 < pred.next.size(); ++j) {
        const double d_a = pred.next[j].i_f.alpha - cfg.betas[j] * pred.next[j + 1].i_f.alpha;
        const double d_b = pred.next[j].i_f.beta - cfg.betas[j] * pred.next[j + 1].i_f.beta;
        share += d_a * d_a + d_b * d_b;
    }
    return cfg.lambda * track + (1.0 - cfg.lambda) * share;
}

std::vector<int> select_vsi_vectors(std::span<const VsiState> states,
                                    std::span<const VsiParams> params, double z_ac, TwoAxis v_ref,
                                    const ControlConfig& cfg, std::span<const int> previous) {
    const std::size_t m = states.size();

    if (cfg.joint_search) {
        double combos = 1.0;
        for (std::size_t j = 0; j < m; ++j) combos *= 8.0;
        if (combos > 1e6)
            throw ControlSetTooLarge("joint vector search needs 8^m <= 1e6; use sequential mode");
    }

    // Per-inverter candidate tables shared by both search modes and both
    // kernel variants.
    const TwoAxis sum_it_k = sum_tie_currents(states);
    std::array<kernels::VsiCandidateTable, kMaxVsis> tables;
    for (std::size_t j = 0; j < m; ++j) {
        const CandidateBasis b = candidate_basis(states[j], params[j], z_ac, sum_it_k, cfg);
        for (int n = 0; n < 8; ++n) {
            const TwoAxis v_n = vsi_voltage_vector(n, params[j].V_in);
            tables[j].if_a[n] = b.if0.alpha + b.k1 * v_n.alpha;
            tables[j].if_b[n] = b.if0.beta + b.k1 * v_n.beta;
            tables[j].it_a[n] = b.it0.alpha + b.k3 * v_n.alpha;
            tables[j].it_b[n] = b.it0.beta + b.k3 * v_n.beta;
        }
    }

    if (cfg.joint_search) {
        kernels::CostScanInput in;
        in.tables = tables.data();
        in.vsi_count = static_cast<int>(m);
        in.betas = cfg.betas.data();
        in.lambda = cfg.lambda;
        in.z_ac = z_ac;
        in.vref_a = v_ref.alpha;
        in.vref_b = v_ref.beta;
        const kernels::CostScanResult r = kernels::active_cost_scan()(in);

        std::vector<int> choice(m, 0);
        std::uint32_t rem = r.index;
        for (std::size_t j = m; j-- > 0;) {
            choice[j] = static_cast<int>(rem & 7u);
            rem >>= 3;
        }
        return choice;
    }

    // Sequential mode: every inverter sweeps its own eight vectors with the
    // others held at their previous actions.
    std::vector<int> held(m, 0);
    for (std::size_t j = 0; j < m && j < previous.size(); ++j) held[j] = previous[j];
    std::vector<int> choice = held;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<int> trial = held;
        double best = 0.0;
        int best_n = 0;
        for (int n = 0; n < 8; ++n) {
            trial[j] = n;
            const double cost = vsi_cost(predict_vsi_group(states, params, trial, z_ac, cfg),
                                         v_ref, cfg);
            if (n == 0 || cost < best) {
                best = cost;
                best_n = n;
            }
        }
        choice[j] = best_n;
    }
    return choice;
}

DroopSetpoint droop_vsi_update(double p_filtered, double q_filtered, const DroopConfig& cfg,
                               double dt, double phase_prev) {
    DroopSetpoint s;
    s.frequency_hz = cfg.f0 - cfg.m_p * p_filtered;
    s.amplitude = cfg.E0 - cfg.n_q * q_filtered;
    s.phase = wrap_phase(phase_prev + 2.0 * std::numbers::pi * s.frequency_hz * dt);
    return s;
}

}  // namespace gridmpc
