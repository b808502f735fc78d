#pragma once

#include <span>
#include <vector>

#include "mgsim/engine.hpp"

namespace mgsim {

struct Phasor {
    double amplitude = 0.0;  ///< peak, not rms
    double phase = 0.0;      ///< rad, cosine convention
};

/// Single-bin DFT at f1 over the trailing window of n_cycles fundamental cycles,
/// rectangular weighting. The window must be an integer number of samples.
/// Throws WindowError otherwise or when the waveform is too short.
Phasor fundamental(std::span<const double> waveform, double f1, double fs, int n_cycles);

/// 100 * sqrt(sum_{h=2..h_max} V_h^2) / V_1 from single-bin DFTs over the same trailing
/// window. Throws WindowError (alignment, h_max*f1 >= fs/2) and DegenerateError (V_1 below
/// 1e-9 of the window rms).
double thd(std::span<const double> waveform, double f1, double fs, int n_cycles,
           int h_max = 50);

/// Amplitudes of harmonics 1..h_max over the trailing window (same preconditions as thd).
std::vector<double> harmonic_amplitudes(std::span<const double> waveform, double f1, double fs,
                                        int n_cycles, int h_max);

/// Post-processed quantities of one run.
struct RunMetrics {
    double thd_pct = 0.0;        ///< THD of the capacitor phase-a voltage [%]
    double v1_amp = 0.0;         ///< fundamental voltage amplitude (ab) or mean v_d (dq) [V]
    double ss_error_pct = 0.0;   ///< |v1_amp - amplitude command| / command [%]
    double overshoot_pct = 0.0;  ///< from the per-cycle amplitude envelope [%]
    double settling_time = 0.0;  ///< envelope inside +-2% of final for good [s]
    bool settled = false;        ///< false when the envelope never stays in band
    double p_mean = 0.0;         ///< mean filtered active power over the window [W]
    double q_mean = 0.0;         ///< mean filtered reactive power over the window [var]
    double delta_omega = 0.0;    ///< mean(omega) - omega_nom over the window [rad/s]
};

/// Extracts RunMetrics over the trailing n_cycles window. Droop shifts the fundamental off
/// nominal, so amplitude and THD are measured at the frequency implied by the recorded
/// omega, on the nearest integer-sample window.
RunMetrics tracking_metrics(const TimeSeries& series, int n_cycles = 10);

/// Fundamental-amplitude (ab) or DC (dq) mismatch between i_L1 and its reference [%].
double current_tracking_error_pct(const TimeSeries& series, int n_cycles = 10);

/// (frequency, amplitude) pairs for harmonics 1..h_max of the capacitor phase-a voltage.
std::vector<std::pair<double, double>> voltage_spectrum(const TimeSeries& series,
                                                        int n_cycles = 10, int h_max = 50);

}  // namespace mgsim
