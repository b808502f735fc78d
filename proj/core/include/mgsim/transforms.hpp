#pragma once

#include <cmath>

namespace mgsim {

/// Instantaneous three-phase quantities (volts or amperes, uniform per instance).
struct Abc {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Stationary-frame pair from the Clarke transform.
struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Rotating-frame pair from the Park transform.
struct Dq {
    double d = 0.0;
    double q = 0.0;
};

inline constexpr double kSqrt3 = 1.7320508075688772;

// Amplitude-invariant Clarke: a balanced set of peak V maps to a circle of radius V.
// Zero sequence is discarded (three-wire balanced system).
inline AlphaBeta clarke(const Abc& x) {
    return {
        (2.0 / 3.0) * (x.a - 0.5 * x.b - 0.5 * x.c),
        (2.0 / 3.0) * (kSqrt3 / 2.0) * (x.b - x.c),
    };
}

inline Abc inv_clarke(const AlphaBeta& x) {
    return {
        x.alpha,
        -0.5 * x.alpha + (kSqrt3 / 2.0) * x.beta,
        -0.5 * x.alpha - (kSqrt3 / 2.0) * x.beta,
    };
}

// Rotation into the synchronous frame; norm-preserving.
inline Dq park(const AlphaBeta& x, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {x.alpha * c + x.beta * s, -x.alpha * s + x.beta * c};
}

inline AlphaBeta inv_park(const Dq& x, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {x.d * c - x.q * s, x.d * s + x.q * c};
}

}  // namespace mgsim
