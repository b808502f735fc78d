#pragma once

#include "mgsim/transforms.hpp"

namespace mgsim {

/// P-omega / Q-V droop slopes and nominals.
struct DroopParams {
    double kw = 0.0;         ///< frequency droop slope [(rad/s)/W]
    double kv = 0.0;         ///< amplitude droop slope [V/var]
    double omega_nom = 0.0;  ///< nominal angular frequency [rad/s]
    double e_nom = 0.0;      ///< nominal phase peak amplitude [V]
    double wf = 0.0;         ///< power-filter cut-off [rad/s]
};

struct PowerMeasurement {
    double p_inst = 0.0;
    double q_inst = 0.0;
    double p_filt = 0.0;
    double q_filt = 0.0;
};

struct PQ {
    double p = 0.0;
    double q = 0.0;
};

/// Droop reference oscillator: accumulated angle (wrapped to [0, 2*pi)) and amplitude command.
struct ReferenceState {
    double theta = 0.0;
    double e = 0.0;
};

// Instantaneous powers under the amplitude-invariant transform. The 3/2 factor makes p
// equal the physical three-phase power.
inline PQ power_ab(const AlphaBeta& v, const AlphaBeta& i) {
    return {
        1.5 * (v.alpha * i.alpha + v.beta * i.beta),
        1.5 * (v.beta * i.alpha - v.alpha * i.beta),
    };
}

// q = 3/2 (vq*id - vd*iq): the rotation-invariant companion of power_ab, positive for an
// inductive (lagging) load.
inline PQ power_dq(const Dq& v, const Dq& i) {
    return {
        1.5 * (v.d * i.d + v.q * i.q),
        1.5 * (v.q * i.d - v.d * i.q),
    };
}

/// First-order low-pass of both power channels: x += wf*ts*(u - x).
void power_filter_step(PowerMeasurement& m, double p_inst, double q_inst, double wf, double ts);

/// omega = omega_nom - kw*p_filt, e = e_nom - kv*q_filt.
inline void droop_law(double p_filt, double q_filt, const DroopParams& d, double& omega,
                      double& e) {
    omega = d.omega_nom - d.kw * p_filt;
    e = d.e_nom - d.kv * q_filt;
}

/// Advances the reference angle by omega*ts (wrapped) and returns the stationary-frame
/// voltage reference e*(cos theta', sin theta'). In dq scenarios the same theta drives the
/// Park transforms and the reference is (e, 0).
AlphaBeta reference_step(ReferenceState& s, double omega, double e, double ts);

void validate(const DroopParams& d);

}  // namespace mgsim
