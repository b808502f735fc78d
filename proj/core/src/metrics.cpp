#include "mgsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "mgsim/errors.hpp"

namespace mgsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// Single-bin DFT at frequency f over the trailing `window` samples.
std::complex<double> bin_at(std::span<const double> x, double f, double fs, size_t window) {
    const size_t n0 = x.size() - window;
    const double dphi = kTwoPi * f / fs;
    std::complex<double> acc{0.0, 0.0};
    for (size_t m = 0; m < window; ++m) {
        const double ph = dphi * static_cast<double>(m);
        acc += x[n0 + m] * std::complex<double>(std::cos(ph), -std::sin(ph));
    }
    return acc * (2.0 / static_cast<double>(window));
}

size_t checked_window(std::span<const double> x, double f1, double fs, int n_cycles) {
    if (!(f1 > 0.0) || !(fs > 0.0) || n_cycles < 1)
        throw WindowError("fundamental/thd: need f1 > 0, fs > 0, n_cycles >= 1");
    const double q = static_cast<double>(n_cycles) * fs / f1;
    const auto window = static_cast<long long>(std::llround(q));
    if (window < 2 || std::fabs(q - static_cast<double>(window)) > 1e-6)
        throw WindowError("window of " + std::to_string(n_cycles) +
                          " cycles is not an integer number of samples (" + std::to_string(q) +
                          ")");
    if (static_cast<size_t>(window) > x.size())
        throw WindowError("waveform shorter than the analysis window");
    return static_cast<size_t>(window);
}

double window_rms(std::span<const double> x, size_t window) {
    const size_t n0 = x.size() - window;
    double acc = 0.0;
    for (size_t m = n0; m < x.size(); ++m) acc += x[m] * x[m];
    return std::sqrt(acc / static_cast<double>(window));
}

double mean_tail(std::span<const double> x, size_t window) {
    const size_t n0 = x.size() - window;
    return std::accumulate(x.begin() + static_cast<long>(n0), x.end(), 0.0) /
           static_cast<double>(window);
}

std::vector<double> column(const TimeSeries& s, double SampleRecord::* field) {
    std::vector<double> v;
    v.reserve(s.samples.size());
    for (const auto& r : s.samples) v.push_back(r.*field);
    return v;
}

// Phase-a voltage at the configured distortion measurement point.
std::vector<double> thd_waveform(const TimeSeries& s) {
    std::vector<double> v;
    v.reserve(s.samples.size());
    if (s.config.thd_point == ThdPoint::LoadTerminal) {
        for (const auto& r : s.samples) v.push_back(s.config.plant.r_load * r.il2.a);
    } else {
        for (const auto& r : s.samples) v.push_back(r.vc.a);
    }
    return v;
}
}  // namespace

Phasor fundamental(std::span<const double> waveform, double f1, double fs, int n_cycles) {
    const size_t window = checked_window(waveform, f1, fs, n_cycles);
    const auto c = bin_at(waveform, f1, fs, window);
    return {std::abs(c), std::arg(c)};
}

std::vector<double> harmonic_amplitudes(std::span<const double> waveform, double f1, double fs,
                                        int n_cycles, int h_max) {
    if (h_max < 1) throw WindowError("h_max must be >= 1");
    if (!(h_max * f1 < 0.5 * fs))
        throw WindowError("h_max*f1 = " + std::to_string(h_max * f1) +
                          " Hz is not below fs/2 = " + std::to_string(0.5 * fs) + " Hz");
    const size_t window = checked_window(waveform, f1, fs, n_cycles);
    std::vector<double> amps(static_cast<size_t>(h_max));
    for (int h = 1; h <= h_max; ++h)
        amps[static_cast<size_t>(h - 1)] = std::abs(bin_at(waveform, h * f1, fs, window));
    return amps;
}

double thd(std::span<const double> waveform, double f1, double fs, int n_cycles, int h_max) {
    const auto amps = harmonic_amplitudes(waveform, f1, fs, n_cycles, h_max);
    const size_t window = checked_window(waveform, f1, fs, n_cycles);
    const double v1 = amps[0];
    if (v1 < 1e-9 * window_rms(waveform, window))
        throw DegenerateError("thd: fundamental amplitude below noise floor");
    double harm_sq = 0.0;
    for (size_t i = 1; i < amps.size(); ++i) harm_sq += amps[i] * amps[i];
    return 100.0 * std::sqrt(harm_sq) / v1;
}

RunMetrics tracking_metrics(const TimeSeries& series, int n_cycles) {
    const auto& cfg = series.config;
    const double fs = series.sample_rate();
    const double f_nom = cfg.droop.omega_nom / kTwoPi;
    const bool ab = cfg.frame == Frame::StationaryAB;

    const auto nominal_window =
        static_cast<size_t>(std::llround(static_cast<double>(n_cycles) * fs / f_nom));
    if (nominal_window < 2 || nominal_window > series.samples.size())
        throw WindowError("run shorter than the metrics window");

    const auto omega_col = column(series, &SampleRecord::omega);
    const double omega_hat = mean_tail(omega_col, nominal_window);
    const double f_hat = omega_hat / kTwoPi;

    // Nearest integer-sample window around the measured fundamental; the bin frequency is
    // exact for that window, which keeps spectral leakage out of the harmonics.
    const auto window =
        static_cast<size_t>(std::llround(static_cast<double>(n_cycles) * fs / f_hat));
    if (window < 2 || window > series.samples.size())
        throw WindowError("run shorter than the metrics window");
    const double f1 = static_cast<double>(n_cycles) * fs / static_cast<double>(window);

    std::vector<double> vmeas0, e_col, p_col, q_col;
    vmeas0.reserve(series.samples.size());
    for (const auto& r : series.samples) {
        vmeas0.push_back(r.vmeas[0]);
        e_col.push_back(r.e);
        p_col.push_back(r.p_filt);
        q_col.push_back(r.q_filt);
    }
    const std::vector<double> va = thd_waveform(series);

    RunMetrics m;
    m.v1_amp = ab ? std::abs(bin_at(vmeas0, f1, fs, window)) : mean_tail(vmeas0, nominal_window);

    const double e_cmd = mean_tail(e_col, nominal_window);
    m.ss_error_pct = 100.0 * std::fabs(m.v1_amp - e_cmd) / e_cmd;

    const int h_max = std::min(50, static_cast<int>(std::floor(0.5 * fs / f1 - 1e-9)) - 0);
    if (h_max >= 2) {
        const size_t n0 = va.size() - window;
        std::span<const double> tail(va.data() + n0, window);
        const double v1 = std::abs(bin_at(tail, f1, fs, window));
        double harm_sq = 0.0;
        for (int h = 2; h <= h_max; ++h) {
            const double vh = std::abs(bin_at(tail, h * f1, fs, window));
            harm_sq += vh * vh;
        }
        m.thd_pct = 100.0 * std::sqrt(harm_sq) / v1;
    }

    m.p_mean = mean_tail(p_col, nominal_window);
    m.q_mean = mean_tail(q_col, nominal_window);
    m.delta_omega = omega_hat - cfg.droop.omega_nom;

    // Cycle-by-cycle amplitude envelope at the nominal period; raw sinusoids have no
    // meaningful overshoot.
    const auto cycle = static_cast<size_t>(std::llround(fs / f_nom));
    const size_t n_env = series.samples.size() / cycle;
    std::vector<double> env(n_env);
    for (size_t j = 0; j < n_env; ++j) {
        std::span<const double> w(vmeas0.data() + j * cycle, cycle);
        env[j] = ab ? std::abs(bin_at(w, f_nom, fs, cycle)) : mean_tail(w, cycle);
    }
    const double final_amp = m.v1_amp;
    const double peak = env.empty() ? final_amp : *std::max_element(env.begin(), env.end());
    m.overshoot_pct = std::max(0.0, 100.0 * (peak - final_amp) / final_amp);

    m.settled = false;
    m.settling_time = static_cast<double>(series.samples.size()) / fs;
    for (size_t j = 0; j < n_env; ++j) {
        bool stays = true;
        for (size_t mth = j; mth < n_env; ++mth) {
            if (std::fabs(env[mth] - final_amp) > 0.02 * final_amp) {
                stays = false;
                break;
            }
        }
        if (stays) {
            m.settled = true;
            m.settling_time = static_cast<double>((j + 1) * cycle) / fs;
            break;
        }
    }
    return m;
}

double current_tracking_error_pct(const TimeSeries& series, int n_cycles) {
    const auto& cfg = series.config;
    const double fs = series.sample_rate();
    const double f_nom = cfg.droop.omega_nom / kTwoPi;
    const bool ab = cfg.frame == Frame::StationaryAB;

    const auto omega_col = column(series, &SampleRecord::omega);
    const auto nominal_window =
        static_cast<size_t>(std::llround(static_cast<double>(n_cycles) * fs / f_nom));
    if (nominal_window < 2 || nominal_window > series.samples.size())
        throw WindowError("run shorter than the metrics window");
    const double f_hat = mean_tail(omega_col, nominal_window) / kTwoPi;
    const auto window =
        static_cast<size_t>(std::llround(static_cast<double>(n_cycles) * fs / f_hat));
    const double f1 = static_cast<double>(n_cycles) * fs / static_cast<double>(window);

    std::vector<double> iref0, imeas0;
    iref0.reserve(series.samples.size());
    for (const auto& r : series.samples) {
        iref0.push_back(r.iref[0]);
        imeas0.push_back(r.imeas[0]);
    }
    double ref_amp, meas_amp;
    if (ab) {
        ref_amp = std::abs(bin_at(iref0, f1, fs, window));
        meas_amp = std::abs(bin_at(imeas0, f1, fs, window));
    } else {
        ref_amp = mean_tail(iref0, nominal_window);
        meas_amp = mean_tail(imeas0, nominal_window);
    }
    if (std::fabs(ref_amp) < 1e-12)
        throw DegenerateError("current reference amplitude is zero");
    return 100.0 * std::fabs(meas_amp - ref_amp) / std::fabs(ref_amp);
}

std::vector<std::pair<double, double>> voltage_spectrum(const TimeSeries& series, int n_cycles,
                                                        int h_max) {
    const double fs = series.sample_rate();
    const auto omega_col = column(series, &SampleRecord::omega);
    const double f_nom = series.config.droop.omega_nom / kTwoPi;
    const auto nominal_window =
        static_cast<size_t>(std::llround(static_cast<double>(n_cycles) * fs / f_nom));
    if (nominal_window < 2 || nominal_window > series.samples.size())
        throw WindowError("run shorter than the spectrum window");
    const double f_hat = mean_tail(omega_col, nominal_window) / kTwoPi;
    const auto window =
        static_cast<size_t>(std::llround(static_cast<double>(n_cycles) * fs / f_hat));
    const double f1 = static_cast<double>(n_cycles) * fs / static_cast<double>(window);

    const int h_lim = std::min(h_max, static_cast<int>(std::floor(0.5 * fs / f1 - 1e-9)));
    const std::vector<double> va = thd_waveform(series);

    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<size_t>(std::max(h_lim, 0)));
    for (int h = 1; h <= h_lim; ++h)
        out.emplace_back(h * f1, std::abs(bin_at(va, h * f1, fs, window)));
    return out;
}

}  // namespace mgsim
