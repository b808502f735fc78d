#pragma once

#include <array>
#include <vector>

#include "mgsim/transforms.hpp"

namespace mgsim {

/// Quasi-resonant (damped PR) compensator parameters,
/// continuous prototype G(s) = kp + ki*s / (s^2 + 2*wc*s + w0^2).
struct PrParams {
    double kp = 0.0;  ///< proportional gain
    double ki = 0.0;  ///< resonant integral gain
    double w0 = 0.0;  ///< resonant frequency [rad/s]
    double wc = 0.0;  ///< damping cut-off [rad/s]; peak gain is ki/(2*wc)
};

/// PI compensator parameters, G(s) = kp + ki/s.
struct PiParams {
    double kp = 0.0;
    double ki = 0.0;  ///< integral gain [1/s]
};

/// One selective-harmonic resonant section, G_h(s) = ki*s / (s^2 + 2*wc*s + (h*w0)^2).
struct HarmonicTerm {
    int order = 0;    ///< harmonic order h (> 1)
    double ki = 0.0;  ///< resonant gain
};

using HarmonicCompParams = std::vector<HarmonicTerm>;

/// Normalized second-order section, H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct SosCoeffs {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

/// Internal states of one discretized second-order section (direct form II transposed).
struct ResonatorState {
    double x1 = 0.0;
    double x2 = 0.0;

    void reset() { x1 = x2 = 0.0; }

    double step(const SosCoeffs& c, double u) {
        const double y = c.b0 * u + x1;
        x1 = c.b1 * u - c.a1 * y + x2;
        x2 = c.b2 * u - c.a2 * y;
        return y;
    }
};

/// Trapezoidal integrator state for the PI compensator.
struct IntegratorState {
    double acc = 0.0;
    double prev_error = 0.0;

    void reset() { acc = prev_error = 0.0; }
};

/// Bilinear (trapezoidal) discretization of the resonant part of a PR compensator,
/// frequency-prewarped at w0 so the discrete magnitude at w0 equals the continuous one.
/// Throws ConfigError if w0 is at or above the Nyquist rate pi/ts.
SosCoeffs discretize_resonator(const PrParams& p, double ts);

/// Discretization of one harmonic section at h*w0, damped with wc.
SosCoeffs discretize_harmonic(const HarmonicTerm& term, double w0, double wc, double ts);

/// One PR update: kp*error plus the resonant-section output.
double pr_step(ResonatorState& state, double error, const PrParams& p, double ts);

/// One PI update with trapezoidal integration. No anti-windup; saturation lives in the PWM stage.
double pi_step(IntegratorState& state, double error, const PiParams& p, double ts);

/// Sum of selective-harmonic resonant sections.
double harmonic_comp_step(std::vector<ResonatorState>& states, double error,
                          const HarmonicCompParams& p, double w0, double wc, double ts);

/// A pair of identically-tuned PR compensators (one per axis) with cached coefficients.
/// tune() re-discretizes at a new resonant frequency without touching the states, which
/// lets the engine follow the droop-commanded frequency.
class PrPair {
public:
    PrPair() = default;
    PrPair(const PrParams& params, double ts);

    void tune(double w0);
    const PrParams& params() const { return params_; }

    AlphaBeta step(const AlphaBeta& error);

private:
    PrParams params_{};
    double ts_ = 0.0;
    SosCoeffs coeffs_{};
    ResonatorState s1_{}, s2_{};
};

/// A pair of PI compensators (d and q axes).
class PiPair {
public:
    PiPair() = default;
    PiPair(const PiParams& params, double ts) : params_(params), ts_(ts) {}

    const PiParams& params() const { return params_; }

    Dq step(const Dq& error) {
        return {pi_step(d_, error.d, params_, ts_), pi_step(q_, error.q, params_, ts_)};
    }

private:
    PiParams params_{};
    double ts_ = 0.0;
    IntegratorState d_{}, q_{};
};

/// Parallel bank of harmonic sections on one axis pair, tunable like PrPair.
class HarmonicCompPair {
public:
    HarmonicCompPair() = default;
    HarmonicCompPair(const HarmonicCompParams& params, double w0, double wc, double ts);

    bool enabled() const { return !params_.empty(); }
    void tune(double w0);

    AlphaBeta step(const AlphaBeta& error);

private:
    HarmonicCompParams params_{};
    double wc_ = 0.0;
    double ts_ = 0.0;
    std::vector<SosCoeffs> coeffs_;
    std::vector<ResonatorState> s1_, s2_;
};

// Cascaded loop assemblies.
//
// Stationary frame: plain PR on the error, no feedforward.
AlphaBeta voltage_loop_ab(const AlphaBeta& vref, const AlphaBeta& vc, PrPair& pr);
AlphaBeta current_loop_ab(const AlphaBeta& iref, const AlphaBeta& il1, PrPair& pr);

// Synchronous frame: PI plus capacitor-current decoupling and output-current feedforward
// (voltage loop), inductor decoupling and capacitor-voltage feedforward (current loop).
Dq voltage_loop_dq(const Dq& vref, const Dq& vc, const Dq& io, PiPair& pi, double omega,
                   double c_f);
Dq current_loop_dq(const Dq& iref, const Dq& il1, const Dq& vc, PiPair& pi, double omega,
                   double l1);

void validate(const PrParams& p);
void validate(const PiParams& p);
void validate(const HarmonicCompParams& p, double w0, double ts);

}  // namespace mgsim
