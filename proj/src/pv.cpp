#include "gridmpc/pv.hpp"

#include <algorithm>
#include <cmath>

namespace gridmpc {
namespace {

constexpr double kBoltzmann = 1.380649e-23;  // J/K
constexpr double kElectronCharge = 1.602176634e-19;  // C
constexpr double kBandGapEv = 1.12;          // silicon
constexpr double kTstcKelvin = 298.15;

struct DiodeOperatingPoint {
    double i_ph;   // photocurrent, A
    double i_0;    // saturation current, A
    double v_therm; // n * N_s * V_t, volts
};

DiodeOperatingPoint diode_point(double irradiance, double temperature, const PvArrayParams& p) {
    const double t_kelvin = temperature + 273.15;
    const double vt_stc = kBoltzmann * kTstcKelvin / kElectronCharge;
    const double a_stc = p.diode_ideality * p.series_cells * vt_stc;

    const double i_ph_stc = p.I_sc_stc;
    const double i_0_stc =
        (i_ph_stc - p.V_oc_stc / p.R_sh) / std::expm1(p.V_oc_stc / a_stc);

    const double i_ph =
        (p.I_sc_stc + p.temp_coeff_isc * (temperature - 25.0)) * std::max(0.0, irradiance) / 1000.0;
    const double ratio = t_kelvin / kTstcKelvin;
    const double i_0 = i_0_stc * ratio * ratio * ratio *
                       std::exp(kBandGapEv * kElectronCharge / (p.diode_ideality * kBoltzmann) *
                                (1.0 / kTstcKelvin - 1.0 / t_kelvin));

    const double vt = kBoltzmann * t_kelvin / kElectronCharge;
    return {i_ph, i_0, p.diode_ideality * p.series_cells * vt};
}

}  // namespace

double pv_array_current(double v, double irradiance, double temperature,
                        const PvArrayParams& params) {
    const DiodeOperatingPoint d = diode_point(irradiance, temperature, params);

    // f(i) = i_ph - i_0*expm1((v + i*R_s)/a) - (v + i*R_s)/R_sh - i, strictly
    // decreasing in i.
    const auto f = [&](double i) {
        const double vd = v + i * params.R_s;
        return d.i_ph - d.i_0 * std::expm1(vd / d.v_therm) - vd / params.R_sh - i;
    };

    double lo = -(d.i_ph + std::abs(v) / params.R_sh + 10.0);
    double hi = d.i_ph + 1.0;
    while (f(hi) > 0.0) hi = hi * 2.0 + 1.0;

    for (int iter = 0; iter < 200 && hi - lo > 1e-9; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) * params.parallel_strings;
}

MppPoint mpp_oracle(double irradiance, double temperature, const PvArrayParams& params) {
    const auto power = [&](double v) {
        return v * pv_array_current(v, irradiance, temperature, params);
    };

    constexpr double inv_phi = 0.61803398874989484820;
    double a = 0.0;
    double b = params.V_oc_stc * 1.05;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = power(c);
    double fd = power(d);
    while (b - a > 0.01) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = power(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = power(d);
        }
    }
    const double v_mpp = 0.5 * (a + b);
    return {v_mpp, power(v_mpp)};
}

double irradiance_for_power(double target_watts, double temperature,
                            const PvArrayParams& params) {
    double lo = 1.0;
    double hi = 1500.0;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mpp_oracle(mid, temperature, params).p_mpp < target_watts)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace gridmpc
