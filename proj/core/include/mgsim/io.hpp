#pragma once

#include <string>

#include "mgsim/engine.hpp"
#include "mgsim/metrics.hpp"

namespace mgsim {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Fixed 17-significant-digit form; lossless and byte-stable for CSV output.
std::string format_double17(double v);

/// timeseries.csv: one row per record (optionally thinned), headers carry the
/// frame-appropriate pair names (alpha/beta or d/q). Numeric fields use 17 significant
/// digits so the file parses back losslessly.
void write_timeseries_csv(const std::string& path, const TimeSeries& series,
                          int every_nth = 1);

/// metrics.txt: "key: value" lines.
void write_metrics_txt(const std::string& path, const TimeSeries& series,
                       const RunMetrics& m, double current_err_pct);

/// fig_tracking.csv (+ .gp): reference vs measured voltage and current, first axis.
/// fig_power.csv (+ .gp): instantaneous and filtered P, Q.
/// fig_spectrum.csv (+ .gp): harmonic amplitudes of the analyzed voltage.
void write_fig_tracking(const std::string& dir, const TimeSeries& series);
void write_fig_power(const std::string& dir, const TimeSeries& series);
void write_fig_spectrum(const std::string& dir, const TimeSeries& series, int n_cycles = 10,
                        int h_max = 50);

/// comparison.txt: both frames' THD, steady-state error and mean power, plus the ordering
/// verdict ("not meaningful" under averaged PWM where no switching harmonics exist).
void write_comparison_txt(const std::string& path, const RunMetrics& ab, const RunMetrics& dq,
                          bool averaged_pwm);

}  // namespace mgsim
