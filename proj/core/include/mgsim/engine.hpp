#pragma once

#include <array>
#include <vector>

#include "mgsim/control.hpp"
#include "mgsim/droop.hpp"
#include "mgsim/plant.hpp"
#include "mgsim/transforms.hpp"

namespace mgsim {

enum class Frame { StationaryAB, SynchronousDQ };

/// Which voltage the distortion metrics analyze.
enum class ThdPoint { Capacitor, LoadTerminal };

const char* frame_name(Frame f);

/// Full parameterization of one run. The PR gain set drives the stationary stack, the PI
/// set the synchronous stack; only the set matching `frame` is used.
struct ScenarioConfig {
    Frame frame = Frame::StationaryAB;
    PlantParams plant{};
    DroopParams droop{};

    PrParams pr_voltage{};  ///< w0 <= 0 means "use droop.omega_nom"
    PrParams pr_current{};
    PiParams pi_voltage{};
    PiParams pi_current{};
    HarmonicCompParams harmonic{};  ///< empty = compensator disabled

    /// Re-tune the resonant sections to the droop-commanded frequency every control step.
    /// The droop angle generator is the frequency authority in islanded operation, so no
    /// PLL is involved; with a fixed w0 the resonators sit kw*P rad/s off the carrier they
    /// must track and lose most of their resonant gain.
    bool pr_track_frequency = true;

    double ts_control = 0.0;    ///< control period [s]
    double h_plant = 0.0;       ///< plant integration step [s]; must divide ts_control
    double t_end = 0.0;         ///< simulated duration [s]
    int record_decimation = 1;  ///< record every n-th control step
    double ramp_cycles = 2.0;   ///< startup amplitude ramp length in fundamental cycles; 0 = off
    ThdPoint thd_point = ThdPoint::Capacitor;  ///< analyzed by metrics, not by the engine
};

/// One recorded control step: per-phase snapshots plus the frame-appropriate signal pairs
/// ((alpha, beta) or (d, q)).
struct SampleRecord {
    double t = 0.0;
    Abc vc{};   ///< capacitor voltages
    Abc il1{};  ///< inverter-side currents
    Abc il2{};  ///< load-side currents
    std::array<double, 2> vref{};   ///< voltage reference pair
    std::array<double, 2> vmeas{};  ///< measured voltage pair
    std::array<double, 2> iref{};   ///< current reference pair
    std::array<double, 2> imeas{};  ///< measured inverter-side current pair
    double p_inst = 0.0, q_inst = 0.0;
    double p_filt = 0.0, q_filt = 0.0;
    double omega = 0.0;  ///< droop frequency command [rad/s]
    double e = 0.0;      ///< applied amplitude command [V]
    double theta = 0.0;  ///< reference angle [rad]
};

struct TimeSeries {
    ScenarioConfig config{};
    std::vector<SampleRecord> samples;

    double sample_rate() const { return 1.0 / (config.ts_control * config.record_decimation); }
};

struct PairResult {
    TimeSeries ab;
    TimeSeries dq;
};

/// Throws ConfigError on any invariant violation.
void validate(const ScenarioConfig& cfg);

/// Executes one scenario: every ts_control measure -> power filter -> droop -> reference ->
/// voltage loop -> current loop -> PWM command; every h_plant pwm_stage + rk4_step.
/// Bit-deterministic for identical configs. Throws ConfigError / NumericalDivergence.
TimeSeries run_scenario(const ScenarioConfig& cfg);

/// Runs one stationary-frame and one synchronous-frame scenario (in parallel); the
/// arguments may come in either order and are matched by their frame field. Both configs
/// must share plant and droop parameters.
PairResult run_pair(const ScenarioConfig& cfg_a, const ScenarioConfig& cfg_b);

}  // namespace mgsim
