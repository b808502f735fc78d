#include "mgsim/io.hpp"

#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace mgsim {

std::string format_double(double v) {
    char buf[64];
    if (v == static_cast<double>(static_cast<long long>(v)) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

std::string format_double17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // '\n' line endings on every platform
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

void write_gnuplot(const std::string& path, const std::string& title, const std::string& plot) {
    auto out = open_out(path);
    out << "set datafile separator ','\n"
        << "set key autotitle columnhead\n"
        << "set title '" << title << "'\n"
        << "plot " << plot << "\n";
}
}  // namespace

void write_timeseries_csv(const std::string& path, const TimeSeries& series, int every_nth) {
    if (every_nth < 1) every_nth = 1;
    auto out = open_out(path);
    const bool ab = series.config.frame == Frame::StationaryAB;
    const char* pair = ab ? "vref_alpha,vref_beta,v_alpha,v_beta,iref_alpha,iref_beta,"
                            "i_alpha,i_beta"
                          : "vref_d,vref_q,v_d,v_q,iref_d,iref_q,i_d,i_q";
    out << "t,va,vb,vc_phase," << pair
        << ",il1_a,il1_b,il1_c,il2_a,il2_b,il2_c,p_inst,q_inst,p_filt,q_filt,omega,e\n";
    for (size_t k = 0; k < series.samples.size(); k += static_cast<size_t>(every_nth)) {
        const auto& r = series.samples[k];
        out << format_double17(r.t) << ',' << format_double17(r.vc.a) << ','
            << format_double17(r.vc.b) << ',' << format_double17(r.vc.c) << ','
            << format_double17(r.vref[0]) << ',' << format_double17(r.vref[1]) << ','
            << format_double17(r.vmeas[0]) << ',' << format_double17(r.vmeas[1]) << ','
            << format_double17(r.iref[0]) << ',' << format_double17(r.iref[1]) << ','
            << format_double17(r.imeas[0]) << ',' << format_double17(r.imeas[1]) << ','
            << format_double17(r.il1.a) << ',' << format_double17(r.il1.b) << ','
            << format_double17(r.il1.c) << ',' << format_double17(r.il2.a) << ','
            << format_double17(r.il2.b) << ',' << format_double17(r.il2.c) << ','
            << format_double17(r.p_inst) << ',' << format_double17(r.q_inst) << ','
            << format_double17(r.p_filt) << ',' << format_double17(r.q_filt) << ','
            << format_double17(r.omega) << ',' << format_double17(r.e) << '\n';
    }
}

void write_metrics_txt(const std::string& path, const TimeSeries& series, const RunMetrics& m,
                       double current_err_pct) {
    auto out = open_out(path);
    out << "frame: " << frame_name(series.config.frame) << '\n'
        << "v1_amp: " << format_double(m.v1_amp) << '\n'
        << "ss_error_pct: " << format_double(m.ss_error_pct) << '\n'
        << "thd_pct: " << format_double(m.thd_pct) << '\n'
        << "overshoot_pct: " << format_double(m.overshoot_pct) << '\n';
    if (m.settled)
        out << "settling_time: " << format_double(m.settling_time) << '\n';
    else
        out << "settling_time: unsettled\n";
    out << "p_mean: " << format_double(m.p_mean) << '\n'
        << "q_mean: " << format_double(m.q_mean) << '\n'
        << "delta_omega: " << format_double(m.delta_omega) << '\n'
        << "current_tracking_error_pct: " << format_double(current_err_pct) << '\n';
}

void write_fig_tracking(const std::string& dir, const TimeSeries& series) {
    const bool ab = series.config.frame == Frame::StationaryAB;
    {
        auto out = open_out(dir + "/fig_tracking.csv");
        out << (ab ? "t,vref_alpha,v_alpha,iref_alpha,i_alpha\n" : "t,vref_d,v_d,iref_d,i_d\n");
        for (const auto& r : series.samples)
            out << format_double17(r.t) << ',' << format_double17(r.vref[0]) << ','
                << format_double17(r.vmeas[0]) << ',' << format_double17(r.iref[0]) << ','
                << format_double17(r.imeas[0]) << '\n';
    }
    write_gnuplot(dir + "/fig_tracking.gp",
                  ab ? "voltage/current tracking (alpha axis)" : "voltage/current tracking (d axis)",
                  "'fig_tracking.csv' using 1:2 with lines, '' using 1:3 with lines, "
                  "'' using 1:4 with lines axes x1y2, '' using 1:5 with lines axes x1y2");
}

void write_fig_power(const std::string& dir, const TimeSeries& series) {
    {
        auto out = open_out(dir + "/fig_power.csv");
        out << "t,p_inst,q_inst,p_filt,q_filt\n";
        for (const auto& r : series.samples)
            out << format_double17(r.t) << ',' << format_double17(r.p_inst) << ','
                << format_double17(r.q_inst) << ',' << format_double17(r.p_filt) << ','
                << format_double17(r.q_filt) << '\n';
    }
    write_gnuplot(dir + "/fig_power.gp", "active/reactive power",
                  "'fig_power.csv' using 1:2 with lines, '' using 1:4 with lines, "
                  "'' using 1:3 with lines, '' using 1:5 with lines");
}

void write_fig_spectrum(const std::string& dir, const TimeSeries& series, int n_cycles,
                        int h_max) {
    const auto spec = voltage_spectrum(series, n_cycles, h_max);
    {
        auto out = open_out(dir + "/fig_spectrum.csv");
        out << "frequency,amplitude\n";
        for (const auto& [f, a] : spec)
            out << format_double17(f) << ',' << format_double17(a) << '\n';
    }
    write_gnuplot(dir + "/fig_spectrum.gp", "voltage spectrum",
                  "'fig_spectrum.csv' using 1:2 with impulses");
}

void write_comparison_txt(const std::string& path, const RunMetrics& ab, const RunMetrics& dq,
                          bool averaged_pwm) {
    auto out = open_out(path);
    out << "thd_ab_pct: " << format_double(ab.thd_pct) << '\n'
        << "thd_dq_pct: " << format_double(dq.thd_pct) << '\n';
    if (averaged_pwm)
        out << "thd_ordering: not meaningful (averaged PWM, no switching harmonics)\n";
    else if (ab.thd_pct > dq.thd_pct)
        out << "thd_ordering: ab > dq\n";
    else
        out << "thd_ordering: dq >= ab\n";
    out << "ss_error_ab_pct: " << format_double(ab.ss_error_pct) << '\n'
        << "ss_error_dq_pct: " << format_double(dq.ss_error_pct) << '\n'
        << "p_mean_ab: " << format_double(ab.p_mean) << '\n'
        << "p_mean_dq: " << format_double(dq.p_mean) << '\n';
}

}  // namespace mgsim
