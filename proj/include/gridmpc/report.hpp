#pragma once

// Figures of merit and the acceptance thresholds. The CLI summary and the
// acceptance test suite evaluate criteria through the same functions, so the
// pass/fail logic has a single home.

#include <string>
#include <vector>

#include "gridmpc/sim.hpp"

namespace gridmpc {

namespace criteria {
inline constexpr double kStartupExclusion = 0.1;    // s ignored at the start of every run
inline constexpr double kEventExclusion = 0.01;     // s ignored after each event for band checks
inline constexpr double kSettleBandPct = 2.0;       // settling band, percent of final value
inline constexpr double kSettleLimit = 0.05;        // s, hard bound on every power transition
inline constexpr double kBusBandPct = 2.0;          // percent, DC bus and PCC RMS bands
inline constexpr double kSharingTolPct = 5.0;       // percent, sharing-ratio tolerance
inline constexpr double kWindowPowerTolPct = 10.0;  // percent, absolute window powers
inline constexpr double kPvLevelTolPct = 1.0;       // percent, PV power levels (35/32 kW)
inline constexpr double kBatteryStepTolPct = 10.0;  // percent, battery step magnitudes
inline constexpr double kFreqDevLimit = 2e-3;       // relative, max |f - f0| / f0
inline constexpr double kMpptQuality = 0.99;        // closed-loop PV power vs oracle
inline constexpr double kTransitionThresholdW = 300.0;  // smaller changes are not transitions
}  // namespace criteria

struct CriterionResult {
    std::string id;
    std::string description;
    bool pass = false;
    std::string detail;
};

struct SummaryReport {
    std::string scenario;
    std::vector<CriterionResult> criteria;
    std::vector<std::string> notes;

    bool all_pass() const;
    std::string to_text() const;
};

/// Scenario-agnostic metrics: per-event settling of every stepped power
/// signal (2% band, 50 ms bound), frequency deviation, bus bands.
SummaryReport compute_metrics(const RunResult& result, const SimulationConfig& config);

// Case-specific acceptance evaluations (A1..A6 of the criteria table).
SummaryReport evaluate_case1(const RunResult& result, const SimulationConfig& config);
SummaryReport evaluate_case2(const RunResult& result, const SimulationConfig& config);
SummaryReport evaluate_case3(const RunResult& result, const SimulationConfig& config);
SummaryReport evaluate_droop_compare(const RunResult& mpc, const RunResult& droop,
                                     const SimulationConfig& config);

/// Max of |f - f_nominal| / f_nominal over rows past the startup window
/// (rows without a valid estimate are skipped). Negative when no row
/// qualifies.
double max_frequency_deviation(const RunResult& result, double f_nominal);

}  // namespace gridmpc
