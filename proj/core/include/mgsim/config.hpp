#pragma once

#include <string>
#include <string_view>

#include "mgsim/engine.hpp"

namespace mgsim {

/// One parsed configuration file: every scenario parameter for both frames. Sections are
/// [plant], [droop], [control], [sim]; keys are lower_snake_case, SI units throughout.
struct FullConfig {
    PlantParams plant{};
    DroopParams droop{};

    // [control] - stationary-frame PR gains share the plain names, dq PI gains take a
    // _dq suffix, matching the two gain blocks of the parameter table.
    double kp_v = 0.0, ki_v = 0.0;
    double kp_i = 0.0, ki_i = 0.0;
    double wc = 0.0;
    bool pr_track_freq = true;
    double kp_v_dq = 0.0, ki_v_dq = 0.0;
    double kp_i_dq = 0.0, ki_i_dq = 0.0;
    HarmonicCompParams harmonics{};

    // [sim]
    Frame frame = Frame::StationaryAB;
    double ts_control = 0.0;
    double h_plant = 0.0;  ///< 0 = auto: 1e-6 when switching, 1e-5 when averaged
    double t_end = 0.0;
    int record_decimation = 1;
    double ramp_cycles = 2.0;
    ThdPoint thd_point = ThdPoint::Capacitor;
};

/// The nominal microgrid: 220 V rms / 50 Hz, R = 145.2 ohm, L1 = 3 mH, C = 4.8162 uF,
/// L2 = 1 mH, droop 3e-4 (rad/s)/W and 4e-3 V/var, both controller gain sets, plus the
/// declared simulation defaults.
FullConfig default_config();

/// Throws ConfigError on unknown sections/keys or malformed values.
FullConfig parse_config(std::string_view text);

/// Reads and parses a file; the path appears in error messages.
FullConfig load_config(const std::string& path);

/// Emits the config in ConfigFile format; parse_config(print_config(c)) round-trips.
std::string print_config(const FullConfig& cfg);

/// Materializes the per-frame ScenarioConfig, resolving h_plant = auto against fsw.
ScenarioConfig to_scenario(const FullConfig& cfg, Frame frame);

}  // namespace mgsim
