#pragma once

// Single-diode PV array model plus the brute-force maximum-power oracle used
// to calibrate defaults and to judge closed-loop MPPT quality.

namespace gridmpc {

/// Array = parallel_strings identical strings of series_cells cells.
/// I_sc/V_oc and the resistances are per-string values at STC (1000 W/m^2,
/// 25 C).
struct PvArrayParams {
    double I_sc_stc = 9.2489;       // string short-circuit current, A
    double V_oc_stc = 700.0;        // string open-circuit voltage, V
    double diode_ideality = 1.30;
    int series_cells = 1080;        // cells in series per string
    int parallel_strings = 7;
    double temp_coeff_isc = 4.5e-3; // A/C per string
    double R_s = 2.0;               // string series resistance, ohms
    double R_sh = 6000.0;           // string shunt resistance, ohms
};

struct MppPoint {
    double v_mpp = 0.0;  // volts
    double p_mpp = 0.0;  // watts
};

/// Terminal current of the array at voltage v. The implicit single-diode
/// equation is monotone in current and is solved by bisection to 1e-9 A.
double pv_array_current(double v, double irradiance, double temperature,
                        const PvArrayParams& params);

/// Maximum power point by golden-section search of v * i(v) over [0, V_oc],
/// resolved to 0.01 V. Independent of the MPPT path.
MppPoint mpp_oracle(double irradiance, double temperature, const PvArrayParams& params);

/// Irradiance whose MPP power equals target_watts (bisection over G at the
/// given temperature). Used to pin the case-study irradiance steps.
double irradiance_for_power(double target_watts, double temperature, const PvArrayParams& params);

}  // namespace gridmpc
