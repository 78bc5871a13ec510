#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gridmpc/control.hpp"
#include "gridmpc/errors.hpp"

using namespace gridmpc;
using doctest::Approx;

namespace {

ControlConfig two_vsi_config(double lambda = 0.5) {
    ControlConfig c;
    c.lambda = lambda;
    c.betas = {0.5};
    return c;
}

}  // namespace

TEST_CASE("pv prediction: hand-evaluated ON and OFF branches") {
    const ControlConfig cfg;
    const PvMeasurement meas{560.0, 558.0, 50.0, 0.0};

    const PvPrediction on = predict_pv(meas, cfg, 1e-3, PvSwitch::kOn);
    CHECK(on.i_next == Approx(61.2).epsilon(1e-12));
    CHECK(on.v_next == Approx(562.0).epsilon(1e-12));
    CHECK(on.p_next == Approx(34394.4).epsilon(1e-12));

    const PvPrediction off = predict_pv(meas, cfg, 1e-3, PvSwitch::kOff);
    CHECK(off.i_next == Approx(50.0));
    CHECK(off.v_next == Approx(562.0));
    CHECK(off.p_next == Approx(28100.0));
}

TEST_CASE("pv prediction: dead panel predicts zero power either way") {
    const ControlConfig cfg;
    const PvMeasurement meas{0.0, 0.0, 50.0, 0.0};
    CHECK(predict_pv(meas, cfg, 1e-3, PvSwitch::kOn).p_next == 0.0);
    CHECK(predict_pv(meas, cfg, 1e-3, PvSwitch::kOff).p_next == 0.0);
}

TEST_CASE("pv switch selection follows the closer predicted power") {
    const ControlConfig cfg;
    PvMeasurement meas{560.0, 558.0, 50.0, 34394.4};
    CHECK(select_pv_switch(meas, cfg, 1e-3) == PvSwitch::kOn);

    meas.p_mpp = 28100.0;
    CHECK(select_pv_switch(meas, cfg, 1e-3) == PvSwitch::kOff);

    meas.p_mpp = 0.5 * (34394.4 + 28100.0);  // equidistant -> OFF
    CHECK(select_pv_switch(meas, cfg, 1e-3) == PvSwitch::kOff);
}

TEST_CASE("dc bus prediction: hand-evaluated pair") {
    const ControlConfig cfg;
    const DcMeasurement meas{800.0, 20.0, 10.0};
    const DcBusPrediction p = predict_dc_bus(meas, cfg, 5e-3);
    CHECK(p.v_next_10 == Approx(800.04).epsilon(1e-12));
    CHECK(p.v_next_01 == Approx(799.96).epsilon(1e-12));

    const DcBusPrediction balanced = predict_dc_bus({800.0, 10.0, 10.0}, cfg, 5e-3);
    CHECK(balanced.v_next_10 == 800.0);

    const DcBusPrediction no_draw = predict_dc_bus({800.0, 20.0, 0.0}, cfg, 5e-3);
    CHECK(no_draw.v_next_01 == 800.0);
}

TEST_CASE("battery selection: symmetric predictions fall to the (0,1) tie rule") {
    const ControlConfig cfg;  // V_DC_ref = 800
    CHECK(select_battery_switches({800.0, 20.0, 10.0}, cfg, 5e-3) == BatteryPair::kPair01);

    ControlConfig raised = cfg;
    raised.V_DC_ref = 801.0;
    CHECK(select_battery_switches({800.0, 20.0, 10.0}, raised, 5e-3) == BatteryPair::kPair10);

    CHECK(select_battery_switches({800.0, 0.0, 10.0}, cfg, 5e-3) == BatteryPair::kPair01);
}

TEST_CASE("voltage vectors: zero states and hand-evaluated actives") {
    CHECK(vsi_voltage_vector(0, 1234.0).alpha == 0.0);
    CHECK(vsi_voltage_vector(7, 1234.0).beta == 0.0);

    const TwoAxis v1 = vsi_voltage_vector(1, 800.0);
    CHECK(v1.alpha == Approx(533.333333333).epsilon(1e-9));
    CHECK(v1.beta == 0.0);

    const TwoAxis v3 = vsi_voltage_vector(3, 600.0);
    CHECK(v3.alpha == Approx(-200.0).epsilon(1e-12));
    CHECK(v3.beta == Approx(346.410161514).epsilon(1e-9));
}

TEST_CASE("voltage vector geometry: magnitude and 60-degree spacing") {
    const double v_in = 750.0;
    for (int n = 1; n <= 6; ++n) {
        const TwoAxis v = vsi_voltage_vector(n, v_in);
        CHECK(v.norm() == Approx((2.0 / 3.0) * v_in).epsilon(1e-13));
        const TwoAxis w = vsi_voltage_vector(n % 6 + 1, v_in);
        const double angle = std::atan2(v.cross(w), v.dot(w));
        CHECK(std::abs(angle - std::numbers::pi / 3.0) < 1e-12);
    }
    CHECK_THROWS_AS(vsi_voltage_vector(8, 100.0), std::out_of_range);
}

TEST_CASE("vsi group prediction: rest state under zero vectors stays at rest") {
    const ControlConfig cfg = two_vsi_config();
    const std::vector<VsiState> states(2);
    const std::vector<VsiParams> params(2);
    const std::vector<int> choice(2, 0);
    const VsiPrediction p = predict_vsi_group(states, params, choice, 6.448, cfg);
    CHECK(p.next[0].i_f.alpha == 0.0);
    CHECK(p.next[1].i_t.beta == 0.0);
    CHECK(p.v_pcc_next.alpha == 0.0);
}

TEST_CASE("vsi group prediction: cascaded one-step response from rest") {
    // Cascade: the active vector reaches i_F at T_S/L_F, the local bus at
    // T_S^2/(L_F C_f), the tie line at T_S^3/(L_F C_f L_T).
    ControlConfig cfg;
    cfg.betas = {};
    VsiParams vp;
    vp.L_F = 2e-3;
    vp.C_f = 10e-6;
    vp.L_T = 0.5e-3;
    vp.V_in = 800.0;
    const std::vector<VsiState> states(1);
    const std::vector<VsiParams> params(1, vp);
    const std::vector<int> choice(1, 1);
    const VsiPrediction p = predict_vsi_group(states, params, choice, 6.448, cfg);

    const double v_alpha = (2.0 / 3.0) * 800.0;
    const double if_alpha = (cfg.T_S / vp.L_F) * v_alpha;  // 5.3333 A
    CHECK(p.next[0].i_f.alpha == Approx(if_alpha).epsilon(1e-12));
    CHECK(p.next[0].i_f.beta == 0.0);
    const double vb_alpha = (cfg.T_S / vp.C_f) * if_alpha;
    CHECK(p.next[0].v_bus.alpha == Approx(vb_alpha).epsilon(1e-12));
    const double it_alpha = (cfg.T_S / vp.L_T) * vb_alpha;
    CHECK(p.next[0].i_t.alpha == Approx(it_alpha).epsilon(1e-12));
    CHECK(p.v_pcc_next.alpha == Approx(6.448 * it_alpha).epsilon(1e-12));
}

TEST_CASE("vsi group prediction: identical inverters predict identically") {
    const ControlConfig cfg = two_vsi_config();
    std::vector<VsiState> states(2);
    states[0].i_f = states[1].i_f = {4.0, -2.0};
    states[0].v_bus = states[1].v_bus = {250.0, 60.0};
    states[0].i_t = states[1].i_t = {7.0, 1.0};
    const std::vector<VsiParams> params(2);
    const std::vector<int> choice(2, 5);
    const VsiPrediction p = predict_vsi_group(states, params, choice, 6.448, cfg);
    CHECK(p.next[0].i_f.alpha == p.next[1].i_f.alpha);
    CHECK(p.next[0].v_bus.beta == p.next[1].v_bus.beta);
    CHECK(p.next[0].i_t.alpha == p.next[1].i_t.alpha);
}

TEST_CASE("vsi cost: perfect tracking with exact sharing is free") {
    const ControlConfig cfg = two_vsi_config();
    VsiPrediction p;
    p.next.resize(2);
    p.next[0].i_f = {10.0, -4.0};
    p.next[1].i_f = {20.0, -8.0};  // exactly beta-matched at 0.5
    p.v_pcc_next = {311.0, 0.0};
    CHECK(vsi_cost(p, {311.0, 0.0}, cfg) == 0.0);
}

TEST_CASE("vsi cost: lambda = 1 reduces to pure tracking error") {
    ControlConfig cfg = two_vsi_config(1.0);
    VsiPrediction p;
    p.next.resize(2);
    p.next[0].i_f = {10.0, 0.0};
    p.next[1].i_f = {99.0, 0.0};  // wildly unshared, but weightless
    p.v_pcc_next = {310.0, 0.0};
    CHECK(vsi_cost(p, {311.0, 0.0}, cfg) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vsi cost: hand-evaluated mixed case") {
    const ControlConfig cfg = two_vsi_config(0.5);
    VsiPrediction p;
    p.next.resize(2);
    p.next[0].i_f = {10.0, 0.0};
    p.next[1].i_f = {22.0, 0.0};
    p.v_pcc_next = {310.0, 0.0};
    CHECK(vsi_cost(p, {311.0, 0.0}, cfg) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vector selection: all-zero state with zero reference takes the tie tuple") {
    const ControlConfig cfg = two_vsi_config();
    const std::vector<VsiState> states(2);
    const std::vector<VsiParams> params(2);
    const std::vector<int> choice = select_vsi_vectors(states, params, 6.448, {0.0, 0.0}, cfg);
    CHECK(choice == std::vector<int>{0, 0});
}

TEST_CASE("vector selection: the vector that exactly cancels the error is chosen") {
    // m=1, lambda=1: aim the reference at the predicted PCC voltage of one
    // specific candidate; only that candidate reaches zero cost.
    ControlConfig cfg;
    cfg.lambda = 1.0;
    cfg.betas = {};
    std::vector<VsiState> states(1);
    states[0].i_f = {12.0, -3.0};
    states[0].v_bus = {280.0, 90.0};
    states[0].i_t = {20.0, 5.0};
    const std::vector<VsiParams> params(1);

    for (int target = 1; target <= 6; ++target) {
        const std::vector<int> choice_target(1, target);
        const VsiPrediction p = predict_vsi_group(states, params, choice_target, 6.448, cfg);
        const std::vector<int> chosen =
            select_vsi_vectors(states, params, 6.448, p.v_pcc_next, cfg);
        CHECK(chosen == choice_target);
    }
}

namespace {

std::vector<int> brute_force_select(std::span<const VsiState> states,
                                    std::span<const VsiParams> params, double z_ac, TwoAxis v_ref,
                                    const ControlConfig& cfg, double scale = 1.0) {
    const std::size_t m = states.size();
    std::vector<int> best, trial(m, 0);
    double best_cost = 0.0;
    bool first = true;
    const std::uint64_t total = 1ull << (3 * m);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rem = idx;
        for (std::size_t j = m; j-- > 0;) {
            trial[j] = static_cast<int>(rem & 7u);
            rem >>= 3;
        }
        const double cost =
            scale * vsi_cost(predict_vsi_group(states, params, trial, z_ac, cfg), v_ref, cfg);
        if (first || cost < best_cost) {
            best_cost = cost;
            best = trial;
            first = false;
        }
    }
    return best;
}

VsiState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> amp(-60.0, 60.0);
    std::uniform_real_distribution<double> volt(-400.0, 400.0);
    VsiState s;
    s.i_f = {amp(rng), amp(rng)};
    s.v_bus = {volt(rng), volt(rng)};
    s.i_t = {amp(rng), amp(rng)};
    return s;
}

}  // namespace

TEST_CASE("vector selection equals exhaustive re-enumeration on random states") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const std::vector<VsiParams> params(2);
    for (int trial = 0; trial < 1000; ++trial) {
        const ControlConfig cfg = two_vsi_config(0.3 + 0.4 * (trial % 5) / 4.0);
        std::vector<VsiState> states{random_state(rng), random_state(rng)};
        const double th = phase(rng);
        const TwoAxis v_ref{311.0 * std::cos(th), 311.0 * std::sin(th)};
        const auto fast = select_vsi_vectors(states, params, 6.448, v_ref, cfg);
        const auto brute = brute_force_select(states, params, 6.448, v_ref, cfg);
        REQUIRE(fast == brute);
    }
}

TEST_CASE("costs are non-negative and vanish only when both terms do") {
    std::mt19937 rng(1234);
    const std::vector<VsiParams> params(2);
    const ControlConfig cfg = two_vsi_config();
    std::vector<int> trial(2, 0);
    for (int t = 0; t < 500; ++t) {
        std::vector<VsiState> states{random_state(rng), random_state(rng)};
        trial[0] = t % 8;
        trial[1] = (t / 8) % 8;
        const VsiPrediction p = predict_vsi_group(states, params, trial, 6.448, cfg);
        const double j = vsi_cost(p, {311.0, 0.0}, cfg);
        CHECK(j >= 0.0);
        if (j == 0.0) {
            CHECK(p.v_pcc_next.alpha == 311.0);
            CHECK(p.v_pcc_next.beta == 0.0);
            CHECK(p.next[0].i_f.alpha == cfg.betas[0] * p.next[1].i_f.alpha);
        }
    }
}

TEST_CASE("argmin is invariant under positive cost scaling") {
    std::mt19937 rng(4242);
    const std::vector<VsiParams> params(2);
    const ControlConfig cfg = two_vsi_config();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<VsiState> states{random_state(rng), random_state(rng)};
        const TwoAxis v_ref{311.0, 0.0};
        const auto base = brute_force_select(states, params, 6.448, v_ref, cfg, 1.0);
        const auto scaled = brute_force_select(states, params, 6.448, v_ref, cfg, 37.25);
        CHECK(base == scaled);
    }
}

TEST_CASE("pv and battery selections equal their two-candidate enumerations") {
    std::mt19937 rng(991);
    std::uniform_real_distribution<double> v(0.0, 700.0), i(0.0, 80.0), p(0.0, 40000.0);
    std::uniform_real_distribution<double> bus(780.0, 820.0), amps(-60.0, 60.0);
    const ControlConfig cfg;
    for (int trial = 0; trial < 1000; ++trial) {
        const PvMeasurement pm{v(rng), v(rng), i(rng), p(rng)};
        const double j_on = std::abs(predict_pv(pm, cfg, 1e-3, PvSwitch::kOn).p_next - pm.p_mpp);
        const double j_off = std::abs(predict_pv(pm, cfg, 1e-3, PvSwitch::kOff).p_next - pm.p_mpp);
        const PvSwitch expected = j_on < j_off ? PvSwitch::kOn : PvSwitch::kOff;
        CHECK(select_pv_switch(pm, cfg, 1e-3) == expected);

        const DcMeasurement dm{bus(rng), amps(rng), amps(rng)};
        const DcBusPrediction bp = predict_dc_bus(dm, cfg, 5e-3);
        const BatteryPair expected_pair =
            std::abs(cfg.V_DC_ref - bp.v_next_10) < std::abs(cfg.V_DC_ref - bp.v_next_01)
                ? BatteryPair::kPair10
                : BatteryPair::kPair01;
        CHECK(select_battery_switches(dm, cfg, 5e-3) == expected_pair);
    }
}

TEST_CASE("joint search rejects control sets past a million candidates") {
    ControlConfig cfg;
    cfg.betas.assign(6, 1.0);
    const std::vector<VsiState> states(7);
    const std::vector<VsiParams> params(7);
    CHECK_THROWS_AS(select_vsi_vectors(states, params, 6.448, {311.0, 0.0}, cfg),
                    ControlSetTooLarge);
}

TEST_CASE("sequential mode sweeps each inverter against held actions") {
    ControlConfig cfg = two_vsi_config();
    cfg.joint_search = false;
    std::mt19937 rng(55);
    std::vector<VsiState> states{random_state(rng), random_state(rng)};
    const std::vector<VsiParams> params(2);
    const std::vector<int> prev{3, 6};
    const auto choice = select_vsi_vectors(states, params, 6.448, {311.0, 0.0}, cfg, prev);
    REQUIRE(choice.size() == 2);

    // Inverter 0's pick must beat every alternative with inverter 1 held.
    for (int n = 0; n < 8; ++n) {
        const std::vector<int> trial{n, prev[1]};
        const std::vector<int> chosen{choice[0], prev[1]};
        const double c_trial =
            vsi_cost(predict_vsi_group(states, params, trial, 6.448, cfg), {311.0, 0.0}, cfg);
        const double c_chosen =
            vsi_cost(predict_vsi_group(states, params, chosen, 6.448, cfg), {311.0, 0.0}, cfg);
        CHECK(c_chosen <= c_trial);
    }
}

TEST_CASE("droop law: hand-evaluated setpoints") {
    const DroopConfig cfg;
    const DroopSetpoint idle = droop_vsi_update(0.0, 0.0, cfg, 1e-4, 0.0);
    CHECK(idle.frequency_hz == Approx(60.0));
    CHECK(idle.amplitude == Approx(cfg.E0));

    const DroopSetpoint loaded = droop_vsi_update(15000.0, 0.0, cfg, 1e-4, 0.0);
    CHECK(loaded.frequency_hz == Approx(59.85).epsilon(1e-12));

    const DroopSetpoint doubled = droop_vsi_update(30000.0, 0.0, cfg, 1e-4, 0.0);
    CHECK(60.0 - doubled.frequency_hz == Approx(2.0 * (60.0 - loaded.frequency_hz)));
}

TEST_CASE("droop phase advances by 2 pi f dt and wraps") {
    const DroopConfig cfg;
    const double dt = 1e-3;
    DroopSetpoint s = droop_vsi_update(0.0, 0.0, cfg, dt, 0.0);
    CHECK(s.phase == Approx(2.0 * std::numbers::pi * 60.0 * dt));
    s = droop_vsi_update(0.0, 0.0, cfg, dt, 2.0 * std::numbers::pi - 1e-6);
    CHECK(s.phase < 2.0 * std::numbers::pi);
    CHECK(s.phase >= 0.0);
}
