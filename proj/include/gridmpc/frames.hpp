#pragma once

// Stationary-frame types and the amplitude-invariant Clarke transform pair.

#include <cmath>

namespace gridmpc {

/// Phase-domain (a, b, c) quantity, volts or amperes.
struct ThreePhase {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Stationary two-axis (alpha, beta) quantity, volts or amperes.
struct TwoAxis {
    double alpha = 0.0;
    double beta = 0.0;

    constexpr TwoAxis operator+(TwoAxis rhs) const { return {alpha + rhs.alpha, beta + rhs.beta}; }
    constexpr TwoAxis operator-(TwoAxis rhs) const { return {alpha - rhs.alpha, beta - rhs.beta}; }
    constexpr TwoAxis operator*(double s) const { return {alpha * s, beta * s}; }
    constexpr TwoAxis& operator+=(TwoAxis rhs) {
        alpha += rhs.alpha;
        beta += rhs.beta;
        return *this;
    }

    /// alpha*rhs.alpha + beta*rhs.beta
    constexpr double dot(TwoAxis rhs) const { return alpha * rhs.alpha + beta * rhs.beta; }
    /// alpha*rhs.beta - beta*rhs.alpha (z component of the cross product)
    constexpr double cross(TwoAxis rhs) const { return alpha * rhs.beta - beta * rhs.alpha; }
    constexpr double norm2() const { return alpha * alpha + beta * beta; }
    double norm() const { return std::sqrt(norm2()); }
};

constexpr TwoAxis operator*(double s, TwoAxis v) { return v * s; }

/// Amplitude-invariant Clarke transform: a balanced set of peak A maps to a
/// vector of magnitude A.
constexpr TwoAxis clarke_forward(ThreePhase x) {
    constexpr double k = 2.0 / 3.0;
    constexpr double root3_over_2 = 0.86602540378443864676;
    return {k * (x.a - 0.5 * x.b - 0.5 * x.c), k * root3_over_2 * (x.b - x.c)};
}

/// Inverse Clarke, zero-sequence assumed zero.
constexpr ThreePhase clarke_inverse(TwoAxis x) {
    constexpr double root3_over_2 = 0.86602540378443864676;
    return {x.alpha, -0.5 * x.alpha + root3_over_2 * x.beta, -0.5 * x.alpha - root3_over_2 * x.beta};
}

}  // namespace gridmpc
