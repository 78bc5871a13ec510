#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gridmpc/errors.hpp"
#include "gridmpc/plant.hpp"
#include "gridmpc/svm.hpp"

using namespace gridmpc;
using doctest::Approx;

TEST_CASE("dc side: zero currents and loads leave the bus voltage unchanged") {
    DcSideParams p;
    DcSideState s;
    s.v_dc = 800.0;
    const DcSideState next =
        step_dc_side(s, p, PvSwitch::kOff, BatteryPair::kPair01, 0.0, 0.0, 0.0, 1e-5);
    CHECK(next.v_dc == Approx(800.0).epsilon(1e-12));
}

TEST_CASE("dc side: boost ON ramps the inductor at v_PV/L_PV to first order") {
    DcSideParams p;
    p.R_parasitic = 0.0;
    DcSideState s;
    s.v_pv = 560.0;
    s.i_pv = 50.0;
    s.v_dc = 800.0;
    const double t_s = 20e-6;

    // Fine integration over one controller period, ZOH array current.
    DcSideState fine = s;
    const double i_array = 55.0;
    for (int k = 0; k < 10; ++k)
        fine = step_dc_side(fine, p, PvSwitch::kOn, BatteryPair::kPair01, 0.0, 0.0, i_array,
                            t_s / 10.0);

    const double eq4 = s.i_pv + t_s / p.L_PV * s.v_pv;  // one-step Euler prediction
    // Difference is second order in T_S: bound well below the first-order term.
    CHECK(std::abs(fine.i_pv - eq4) < 1e-3 * std::abs(eq4 - s.i_pv));
}

TEST_CASE("dc side: coupled battery current balancing the draw keeps v_DC constant") {
    DcSideParams p;
    DcSideState s;
    s.v_dc = 800.0;
    s.i_bat = 10.0;
    // i_bat feeds the bus (pair (1,0)); i_o draws the same amount.
    const DcSideState next =
        step_dc_side(s, p, PvSwitch::kOff, BatteryPair::kPair10, 10.0, 0.0, 0.0, 1e-7);
    CHECK(next.v_dc == Approx(800.0).epsilon(1e-9));
}

TEST_CASE("dc side: diode blocks reverse boost current when OFF") {
    DcSideParams p;
    DcSideState s;
    s.v_pv = 100.0;
    s.i_pv = 0.0;
    s.v_dc = 800.0;
    const DcSideState next =
        step_dc_side(s, p, PvSwitch::kOff, BatteryPair::kPair01, 0.0, 0.0, 0.0, 1e-5);
    CHECK(next.i_pv == 0.0);
}

TEST_CASE("dc side: runaway state raises NumericalBlowup") {
    DcSideParams p;
    p.C_bat = 1e-15;  // absurd: microamp imbalance slews gigavolts
    DcSideState s;
    s.v_dc = 800.0;
    CHECK_THROWS_AS(step_dc_side(s, p, PvSwitch::kOff, BatteryPair::kPair01, 1e3, 0.0, 0.0, 1.0),
                    NumericalBlowup);
}

TEST_CASE("ac side: zero state with zero vectors stays at rest") {
    const std::vector<VsiParams> params(2);
    const std::vector<VsiState> states(2);
    const std::vector<int> vectors(2, 0);
    const auto next = step_ac_side(states, params, vectors, 6.448, 2e-6);
    for (const VsiState& s : next) {
        CHECK(s.i_f.alpha == 0.0);
        CHECK(s.v_bus.beta == 0.0);
        CHECK(s.i_t.alpha == 0.0);
    }
}

TEST_CASE("ac side: initial filter-current slope is (2/3)V_in/L_F on the alpha axis") {
    const std::vector<VsiParams> params(1, VsiParams{});
    const std::vector<VsiState> states(1);
    const std::vector<int> vectors(1, 1);
    const double dt = 1e-8;  // small enough that the slope dominates
    const auto next = step_ac_side(states, params, vectors, 6.448, dt);
    const double slope = next[0].i_f.alpha / dt;
    CHECK(slope == Approx((2.0 / 3.0) * params[0].V_in / params[0].L_F).epsilon(1e-6));
    CHECK(next[0].i_f.beta == Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("ac side: identical inverters evolve identically") {
    std::vector<VsiParams> params(2);
    std::vector<VsiState> states(2);
    states[0].i_f = states[1].i_f = {3.0, -1.0};
    states[0].v_bus = states[1].v_bus = {200.0, 40.0};
    states[0].i_t = states[1].i_t = {5.0, 2.0};
    const std::vector<int> vectors(2, 3);
    auto next = step_ac_side(states, params, vectors, 6.448, 2e-6);
    CHECK(next[0].i_f.alpha == next[1].i_f.alpha);
    CHECK(next[0].v_bus.beta == next[1].v_bus.beta);
    CHECK(next[0].i_t.alpha == next[1].i_t.alpha);
}

TEST_CASE("relabeling identical inverters permutes the outputs identically") {
    std::vector<VsiParams> params(2);
    std::vector<VsiState> states(2);
    states[0].i_f = {3.0, -1.0};
    states[0].v_bus = {210.0, 40.0};
    states[0].i_t = {6.0, 2.0};
    states[1].i_f = {-8.0, 4.0};
    states[1].v_bus = {190.0, -30.0};
    states[1].i_t = {12.0, -5.0};
    const std::vector<int> vectors{2, 5};

    const auto forward = step_ac_side(states, params, vectors, 6.448, 2e-6);
    std::swap(states[0], states[1]);
    const std::vector<int> swapped_vectors{5, 2};
    const auto swapped = step_ac_side(states, params, swapped_vectors, 6.448, 2e-6);
    CHECK(forward[0].i_f.alpha == swapped[1].i_f.alpha);
    CHECK(forward[0].v_bus.beta == swapped[1].v_bus.beta);
    CHECK(forward[1].i_t.alpha == swapped[0].i_t.alpha);
    CHECK(forward[1].i_t.beta == swapped[0].i_t.beta);
}

TEST_CASE("ac side stepping is deterministic") {
    std::vector<VsiParams> params(2);
    std::vector<VsiState> states(2);
    states[0].i_f = {1.0, 2.0};
    states[1].v_bus = {100.0, -3.0};
    const std::vector<int> vectors{2, 5};
    const auto a = step_ac_side(states, params, vectors, 6.448, 2e-6);
    const auto b = step_ac_side(states, params, vectors, 6.448, 2e-6);
    CHECK(a[0].i_f.alpha == b[0].i_f.alpha);
    CHECK(a[1].i_t.beta == b[1].i_t.beta);
}

TEST_CASE("pcc voltage sums tie currents through the load") {
    CHECK(pcc_voltage(std::vector<VsiState>(3), 6.448).alpha == 0.0);

    std::vector<VsiState> two(2);
    two[0].i_t = {10.0, 0.0};
    two[1].i_t = {20.0, 0.0};
    const TwoAxis v2 = pcc_voltage(two, 4.0);
    CHECK(v2.alpha == Approx(120.0));
    CHECK(v2.beta == 0.0);

    std::vector<VsiState> one(1);
    one[0].i_t = {-5.0, 5.0};
    const TwoAxis v1 = pcc_voltage(one, 2.0);
    CHECK(v1.alpha == Approx(-10.0));
    CHECK(v1.beta == Approx(10.0));
}

TEST_CASE("power flows: zero state reports zero power") {
    NetworkState net;
    net.vsis.resize(2);
    net.p_dcload = 0.0;
    const PowerReport r = power_flows(net, DcSideParams{});
    CHECK(r.p_pv == 0.0);
    CHECK(r.p_bat == 0.0);
    CHECK(r.p_vsi[0] == 0.0);
    CHECK(r.p_pcc_load == 0.0);
}

TEST_CASE("power flows: balanced steady output near 10 kW") {
    NetworkState net;
    net.vsis.resize(1);
    net.vsis[0].v_bus = {311.0, 0.0};
    net.vsis[0].i_t = {21.4, 0.0};
    const PowerReport r = power_flows(net, DcSideParams{});
    CHECK(r.p_vsi[0] == Approx(9983.1).epsilon(1e-9));
}

TEST_CASE("power flows: absorbing battery current reports negative power") {
    NetworkState net;
    net.vsis.resize(1);
    net.dc.i_bat = -20.0;  // charging
    const PowerReport r = power_flows(net, DcSideParams{});
    CHECK(r.p_bat < 0.0);
}
