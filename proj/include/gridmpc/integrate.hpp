#pragma once

// Fixed-step fourth-order Runge-Kutta used as the plant ground truth against
// which the controllers' one-step Euler predictions are measured.

namespace gridmpc {

/// One classic RK4 step. State must support s + s and s * double; the
/// derivative callable maps State -> State (time-invariant right-hand side,
/// inputs are zero-order held over the step).
template <typename State, typename Deriv>
State rk4_step(const State& x, Deriv&& f, double dt) {
    const State k1 = f(x);
    const State k2 = f(x + k1 * (0.5 * dt));
    const State k3 = f(x + k2 * (0.5 * dt));
    const State k4 = f(x + k3 * dt);
    return x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

}  // namespace gridmpc
