#include "gridmpc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace gridmpc {

std::optional<double> estimate_frequency(std::span<const double> samples, double sample_dt,
                                         double window) {
    if (samples.size() < 2 || sample_dt <= 0.0) return std::nullopt;

    const double t_end = static_cast<double>(samples.size() - 1) * sample_dt;
    const double t_min = t_end - window;

    std::vector<double> crossings;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i - 1] < 0.0 && samples[i] >= 0.0) {
            const double t_prev = static_cast<double>(i - 1) * sample_dt;
            const double tc =
                t_prev + sample_dt * (-samples[i - 1]) / (samples[i] - samples[i - 1]);
            if (tc >= t_min) crossings.push_back(tc);
        }
    }
    if (crossings.size() < 2) return std::nullopt;
    const double span = crossings.back() - crossings.front();
    if (span <= 0.0) return std::nullopt;
    return static_cast<double>(crossings.size() - 1) / span;
}

std::optional<double> settling_time(std::span<const double> samples, double sample_dt,
                                    double step_time, double band_pct) {
    if (samples.empty() || sample_dt <= 0.0) throw std::invalid_argument("settling_time: empty trace");
    const double t_end = static_cast<double>(samples.size() - 1) * sample_dt;
    if (step_time > t_end) throw std::invalid_argument("settling_time: step_time beyond trace");

    // Final value from the last 10% of the trace.
    const std::size_t tail = std::max<std::size_t>(1, samples.size() / 10);
    double final_value = 0.0;
    for (std::size_t i = samples.size() - tail; i < samples.size(); ++i) final_value += samples[i];
    final_value /= static_cast<double>(tail);

    const double band = std::abs(final_value) * band_pct / 100.0;
    const std::size_t step_idx =
        static_cast<std::size_t>(std::ceil(step_time / sample_dt - 1e-9));

    // Walk backward from the end to find the last out-of-band sample. A signal
    // still leaving the band inside the final-value window has no steady tail
    // to settle to.
    std::size_t settle_idx = step_idx;
    for (std::size_t i = samples.size(); i-- > step_idx;) {
        if (std::abs(samples[i] - final_value) > band) {
            if (i + 1 >= samples.size() - tail) return std::nullopt;
            settle_idx = i + 1;
            break;
        }
        if (i == step_idx) break;
    }
    const double t_settle = static_cast<double>(settle_idx) * sample_dt;
    return std::max(0.0, t_settle - step_time);
}

double window_mean(std::span<const double> samples, double sample_dt, double t_start, double t0,
                   double t1) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double t = t_start + static_cast<double>(i) * sample_dt;
        if (t >= t0 && t < t1) {
            sum += samples[i];
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace gridmpc
