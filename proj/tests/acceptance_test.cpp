// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gridmpc/cases.hpp"
#include "gridmpc/control.hpp"
#include "gridmpc/metrics.hpp"
#include "gridmpc/pv.hpp"
#include "gridmpc/report.hpp"
#include "gridmpc/sim.hpp"
#include "gridmpc/trace_io.hpp"

using namespace gridmpc;

namespace {

void report_criteria(const SummaryReport& rep) {
    for (const CriterionResult& c : rep.criteria) {
        std::printf("%s %s: %s -- %s\n", c.pass ? "[PASS]" : "[FAIL]", c.id.c_str(),
                    c.description.c_str(), c.detail.c_str());
        CHECK_MESSAGE(c.pass, c.id, ": ", c.detail);
    }
}

void report_line(const char* id, const char* description, bool pass, const std::string& detail) {
    std::printf("%s %s: %s -- %s\n", pass ? "[PASS]" : "[FAIL]", id, description, detail.c_str());
    CHECK_MESSAGE(pass, id, ": ", detail);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("A1-A3: case 1 power balance, 50 ms transitions, bus stiffness") {
    const SimulationConfig cfg = case1_config();
    const RunResult result = run(cfg);
    report_criteria(evaluate_case1(result, cfg));
}

TEST_CASE("A4-A5: case 2 sharing and frequency stiffness") {
    const SimulationConfig cfg = case2_config();
    const RunResult result = run(cfg);
    report_criteria(evaluate_case2(result, cfg));
}

TEST_CASE("A6: case 3 sharing-ratio change") {
    const SimulationConfig cfg = case3_config();
    const RunResult result = run(cfg);
    report_criteria(evaluate_case3(result, cfg));
}

TEST_CASE("A5: droop comparison") {
    const auto [mpc_cfg, droop_cfg] = droop_compare_configs();
    const RunResult mpc = run(mpc_cfg);
    const RunResult droop = run(droop_cfg);
    report_criteria(evaluate_droop_compare(mpc, droop, mpc_cfg));
}

TEST_CASE("A7: closed-loop MPPT quality against the oracle") {
    bool pass = true;
    std::string detail;
    for (double g : {400.0, 700.0, 1000.0}) {
        SimulationConfig cfg = default_config();
        cfg.duration = 0.4;
        cfg.irradiance = g;
        const double target = mpp_oracle(g, cfg.temperature, cfg.pv).p_mpp;
        const RunResult r = run(cfg);

        std::vector<double> p_pv;
        for (const TraceRow& row : r.trace)
            if (row.t >= 0.3) p_pv.push_back(row.p_pv);
        double mean = 0.0;
        for (double p : p_pv) mean += p;
        mean /= static_cast<double>(p_pv.size());

        const bool ok = mean >= criteria::kMpptQuality * target;
        pass = pass && ok;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "G=%.0f: %.0f W vs oracle %.0f W (%.2f%%); ", g, mean,
                      target, 100.0 * mean / target);
        detail += buf;
    }
    report_line("A7", "closed-loop PV power >= 99% of the oracle", pass, detail);
}

namespace {

std::vector<int> brute_force_select(std::span<const VsiState> states,
                                    std::span<const VsiParams> params, double z_ac, TwoAxis v_ref,
                                    const ControlConfig& cfg) {
    const std::size_t m = states.size();
    std::vector<int> best, trial(m, 0);
    double best_cost = 0.0;
    bool first = true;
    for (std::uint64_t idx = 0; idx < (1ull << (3 * m)); ++idx) {
        std::uint64_t rem = idx;
        for (std::size_t j = m; j-- > 0;) {
            trial[j] = static_cast<int>(rem & 7u);
            rem >>= 3;
        }
        const double cost =
            vsi_cost(predict_vsi_group(states, params, trial, z_ac, cfg), v_ref, cfg);
        if (first || cost < best_cost) {
            best_cost = cost;
            best = trial;
            first = false;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("A8: controller-oracle equivalence on 10^4 randomized states") {
    std::mt19937 rng(20180805);
    std::uniform_real_distribution<double> volt(0.0, 700.0);
    std::uniform_real_distribution<double> amps(0.0, 80.0);
    std::uniform_real_distribution<double> watts(0.0, 40000.0);
    std::uniform_real_distribution<double> bus(760.0, 840.0);
    std::uniform_real_distribution<double> bat(-60.0, 60.0);
    std::uniform_real_distribution<double> ac_amp(-60.0, 60.0);
    std::uniform_real_distribution<double> ac_volt(-400.0, 400.0);
    std::uniform_real_distribution<double> angle(0.0, 6.28318530717958648);

    const ControlConfig cfg = [] {
        ControlConfig c;
        c.betas = {0.5};
        return c;
    }();
    const std::vector<VsiParams> params(2);

    int mismatches = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const PvMeasurement pm{volt(rng), volt(rng), amps(rng), watts(rng)};
        const double j_on = std::abs(predict_pv(pm, cfg, 1e-3, PvSwitch::kOn).p_next - pm.p_mpp);
        const double j_off = std::abs(predict_pv(pm, cfg, 1e-3, PvSwitch::kOff).p_next - pm.p_mpp);
        if (select_pv_switch(pm, cfg, 1e-3) !=
            (j_on < j_off ? PvSwitch::kOn : PvSwitch::kOff))
            ++mismatches;

        const DcMeasurement dm{bus(rng), bat(rng), bat(rng)};
        const DcBusPrediction bp = predict_dc_bus(dm, cfg, 5e-3);
        const BatteryPair want =
            std::abs(cfg.V_DC_ref - bp.v_next_10) < std::abs(cfg.V_DC_ref - bp.v_next_01)
                ? BatteryPair::kPair10
                : BatteryPair::kPair01;
        if (select_battery_switches(dm, cfg, 5e-3) != want) ++mismatches;

        std::vector<VsiState> states(2);
        for (VsiState& s : states) {
            s.i_f = {ac_amp(rng), ac_amp(rng)};
            s.v_bus = {ac_volt(rng), ac_volt(rng)};
            s.i_t = {ac_amp(rng), ac_amp(rng)};
        }
        const double th = angle(rng);
        const TwoAxis v_ref{311.0 * std::cos(th), 311.0 * std::sin(th)};
        if (select_vsi_vectors(states, params, 6.448, v_ref, cfg) !=
            brute_force_select(states, params, 6.448, v_ref, cfg))
            ++mismatches;
    }
    report_line("A8", "selected actions equal exhaustive re-enumeration argmin (10^4 states)",
                mismatches == 0,
                std::to_string(trials) + " trials, " + std::to_string(mismatches) + " mismatches");
}

namespace {

/// Prediction errors of Eqs. (4)/(12)/(17) against RK4 fine integration over
/// one horizon of length t_s.
struct PredictionErrors {
    double pv = 0.0;
    double dc = 0.0;
    double vsi = 0.0;
};

PredictionErrors one_step_errors(double t_s) {
    ControlConfig cfg;
    cfg.T_S = t_s;
    cfg.betas = {0.5};
    const DcSideParams dcp;  // R_parasitic defaults to zero, as Eq. (4) assumes
    const PvArrayParams pvp;
    const int fine = 64;

    PredictionErrors err;

    // --- PV boost, switch ON ---
    {
        DcSideState prev;
        prev.v_pv = 540.0;
        prev.i_pv = 45.0;
        prev.v_dc = 800.0;
        const auto advance = [&](DcSideState s, double horizon) {
            for (int i = 0; i < fine; ++i) {
                const double i_array =
                    pv_array_current(s.v_pv, 1000.0, 25.0, pvp);
                s = step_dc_side(s, dcp, PvSwitch::kOn, BatteryPair::kPair01, 9.0, 13000.0,
                                 i_array, horizon / fine);
            }
            return s;
        };
        const DcSideState at_k = advance(prev, t_s);
        const DcSideState truth = advance(at_k, t_s);
        const PvMeasurement meas{at_k.v_pv, prev.v_pv, at_k.i_pv, 0.0};
        const PvPrediction pred = predict_pv(meas, cfg, dcp.L_PV, PvSwitch::kOn);
        err.pv = std::abs(pred.i_next - truth.i_pv) + std::abs(pred.v_next - truth.v_pv);
    }

    // --- DC bus, battery coupled, PV diode feeding the bus ---
    {
        DcSideState s;
        s.v_pv = 560.0;
        s.i_pv = 58.0;
        s.i_bat = -14.0;
        s.v_dc = 801.5;
        const double i_vsi = 9.4;
        DcSideState plant = s;
        for (int i = 0; i < fine; ++i) {
            const double i_array = pv_array_current(plant.v_pv, 1000.0, 25.0, pvp);
            plant = step_dc_side(plant, dcp, PvSwitch::kOff, BatteryPair::kPair10, i_vsi, 13000.0,
                                 i_array, t_s / fine);
        }
        // Net non-battery draw measured at time k, as the engine builds it.
        const DcMeasurement meas{s.v_dc, s.i_bat, 13000.0 / s.v_dc + i_vsi - s.i_pv};
        const DcBusPrediction pred = predict_dc_bus(meas, cfg, dcp.C_bat);
        err.dc = std::abs(pred.v_next_10 - plant.v_dc);
    }

    // --- VSI group, frozen vectors, aggregated over a batch of states ---
    {
        std::vector<VsiParams> params(2);
        std::mt19937 rng(424242);
        std::uniform_real_distribution<double> amp(-40.0, 40.0);
        std::uniform_real_distribution<double> volt(-320.0, 320.0);
        std::uniform_int_distribution<int> vec(0, 7);

        cfg.T_S = t_s;
        double e = 0.0;
        for (int batch = 0; batch < 16; ++batch) {
            std::vector<VsiState> states(2);
            for (VsiState& s : states) {
                s.i_f = {amp(rng), amp(rng)};
                s.v_bus = {volt(rng), volt(rng)};
                s.i_t = {amp(rng), amp(rng)};
            }
            const std::vector<int> vectors{vec(rng), vec(rng)};
            const VsiPrediction pred = predict_vsi_group(states, params, vectors, 6.448, cfg);

            std::vector<VsiState> truth = states;
            for (int i = 0; i < fine; ++i)
                truth = step_ac_side(truth, params, vectors, 6.448, t_s / fine);

            for (std::size_t j = 0; j < 2; ++j) {
                e += (pred.next[j].i_f - truth[j].i_f).norm();
                e += (pred.next[j].v_bus - truth[j].v_bus).norm();
                e += (pred.next[j].i_t - truth[j].i_t).norm();
            }
        }
        err.vsi = e;
    }
    return err;
}

}  // namespace

TEST_CASE("A9: one-step prediction error shrinks at least 3.5x when T_S halves") {
    const PredictionErrors full = one_step_errors(20e-6);
    const PredictionErrors half = one_step_errors(10e-6);
    const double r_pv = full.pv / half.pv;
    const double r_dc = full.dc / half.dc;
    const double r_vsi = full.vsi / half.vsi;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "ratios: PV %.2f, DC bus %.2f, VSI %.2f", r_pv, r_dc, r_vsi);
    report_line("A9", "Eqs. (4)/(12)/(17) predictions are second order in T_S",
                r_pv >= 3.5 && r_dc >= 3.5 && r_vsi >= 3.5, buf);
}

TEST_CASE("A10: identical runs produce byte-identical CSV traces") {
    SimulationConfig cfg = default_config();
    cfg.duration = 0.2;
    const auto dir = std::filesystem::temp_directory_path();
    const std::string p1 = (dir / "gridmpc_det1.csv").string();
    const std::string p2 = (dir / "gridmpc_det2.csv").string();
    write_trace_csv(run(cfg).trace, p1);
    write_trace_csv(run(cfg).trace, p2);
    const bool identical = slurp(p1) == slurp(p2);
    report_line("A10", "two identical run invocations give byte-identical CSV", identical,
                identical ? "byte-identical" : "traces differ");
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("R1: acceptance bands hold across the lambda range") {
    bool pass = true;
    std::string detail;
    for (double lambda : {0.3, 0.7}) {
        SimulationConfig cfg = default_config();
        cfg.duration = 0.35;
        cfg.control.lambda = lambda;
        const RunResult r = run(cfg);

        double max_rms_dev = 0.0, max_dc_dev = 0.0;
        const double ref_rms = cfg.control.v_ref_peak / std::numbers::sqrt2;
        for (const TraceRow& row : r.trace) {
            if (row.t < criteria::kStartupExclusion) continue;
            max_rms_dev = std::max(max_rms_dev, std::abs(row.v_pcc_rms - ref_rms) / ref_rms);
            max_dc_dev = std::max(max_dc_dev, std::abs(row.v_dc - 800.0) / 800.0);
        }
        const bool ok = max_rms_dev < 0.02 && max_dc_dev < 0.02;
        pass = pass && ok;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "lambda=%.1f: PCC %.2f%%, DC %.2f%%; ", lambda,
                      100.0 * max_rms_dev, 100.0 * max_dc_dev);
        detail += buf;
    }
    report_line("R1", "voltage bands hold for lambda in [0.3, 0.7]", pass, detail);
}
