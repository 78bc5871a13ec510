#pragma once

// Signal metrics: zero-crossing frequency estimation, settling time, and the
// low-pass filter used to smooth reported powers.

#include <cmath>
#include <cstddef>
#include <deque>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace gridmpc {

/// Frequency from linearly interpolated rising zero crossings, averaged over
/// the trailing `window` seconds of a uniformly sampled signal. Returns
/// nullopt (InsufficientCrossings) when fewer than two rising crossings fall
/// inside the window.
std::optional<double> estimate_frequency(std::span<const double> samples, double sample_dt,
                                         double window);

/// Settling duration after a step: the time past `step_time` beyond which the
/// signal stays within +/- band_pct percent of its final value (mean of the
/// last 10% of the trace). Returns nullopt (NeverSettles) when the band is
/// never permanently entered. Throws std::invalid_argument when the trace does
/// not extend beyond step_time.
std::optional<double> settling_time(std::span<const double> samples, double sample_dt,
                                    double step_time, double band_pct);

/// First-order IIR low-pass, coefficients fixed by cutoff and sample step.
class LowPassFilter {
public:
    LowPassFilter() = default;
    LowPassFilter(double cutoff_hz, double sample_dt)
        : alpha_(1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz * sample_dt)) {}

    double step(double x) {
        y_ += alpha_ * (x - y_);
        return y_;
    }

    void reset(double y0) { y_ = y0; }
    double value() const { return y_; }

private:
    double alpha_ = 1.0;
    double y_ = 0.0;
};

/// Streaming rising-zero-crossing frequency estimator over a sliding window.
/// Feed one sample per call; the estimate uses the same interpolation rule as
/// estimate_frequency. The hysteresis band suppresses double counts from
/// switching ripple: a crossing only re-arms after the signal has dipped below
/// -hysteresis.
class FrequencyTracker {
public:
    explicit FrequencyTracker(double window_s = 5.0 / 60.0, double hysteresis = 0.0)
        : window_(window_s), hysteresis_(hysteresis) {}

    void feed(double t, double v) {
        if (v < -hysteresis_) armed_ = true;
        if (armed_ && have_prev_ && prev_v_ < 0.0 && v >= 0.0) {
            const double tc = prev_t_ + (t - prev_t_) * (-prev_v_) / (v - prev_v_);
            crossings_.push_back(tc);
            armed_ = hysteresis_ == 0.0;
        }
        prev_t_ = t;
        prev_v_ = v;
        have_prev_ = true;
        while (!crossings_.empty() && crossings_.front() < t - window_) crossings_.pop_front();
    }

    /// Estimated frequency in Hz, or nullopt with fewer than two crossings.
    std::optional<double> frequency() const {
        if (crossings_.size() < 2) return std::nullopt;
        const double span = crossings_.back() - crossings_.front();
        if (span <= 0.0) return std::nullopt;
        return static_cast<double>(crossings_.size() - 1) / span;
    }

private:
    double window_;
    double hysteresis_;
    std::deque<double> crossings_;
    double prev_t_ = 0.0;
    double prev_v_ = 0.0;
    bool have_prev_ = false;
    bool armed_ = false;
};

/// Mean of the samples in [t0, t1) of a uniformly sampled series starting at
/// time offset `t_start`.
double window_mean(std::span<const double> samples, double sample_dt, double t_start, double t0,
                   double t1);

}  // namespace gridmpc
