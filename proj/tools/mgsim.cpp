// mgsim - three-phase islanded inverter simulator comparing the stationary-frame PR stack
// against the synchronous-frame PI stack under droop references.
//
//   mgsim run [--config FILE] [--frame ab|dq] [--out DIR] [--fsw HZ] [--t-end S]
//   mgsim compare [--config FILE] [--out DIR] [--fsw HZ] [--t-end S]
//   mgsim print-defaults

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mgsim/config.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/io.hpp"
#include "mgsim/metrics.hpp"

namespace fs = std::filesystem;
using namespace mgsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "mgsim_out";
    std::optional<double> fsw_override;
    std::optional<double> t_end_override;
};

FullConfig load_effective_config(const CommonOpts& opts) {
    FullConfig cfg = opts.config_path.empty() ? default_config() : load_config(opts.config_path);
    if (opts.fsw_override) cfg.plant.fsw = *opts.fsw_override;
    if (opts.t_end_override) cfg.t_end = *opts.t_end_override;
    return cfg;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory: " + dir);
}

void write_run_artifacts(const std::string& dir, const TimeSeries& series) {
    const RunMetrics m = tracking_metrics(series);
    const double ierr = current_tracking_error_pct(series);
    write_timeseries_csv(dir + "/timeseries.csv", series);
    write_metrics_txt(dir + "/metrics.txt", series, m, ierr);
    write_fig_tracking(dir, series);
    write_fig_power(dir, series);
    write_fig_spectrum(dir, series);
}

int cmd_run(const CommonOpts& opts, const std::string& frame_flag) {
    const FullConfig cfg = load_effective_config(opts);
    Frame frame = cfg.frame;
    if (frame_flag == "ab") frame = Frame::StationaryAB;
    else if (frame_flag == "dq") frame = Frame::SynchronousDQ;
    else if (!frame_flag.empty()) throw ConfigError("--frame must be 'ab' or 'dq'");

    const ScenarioConfig sc = to_scenario(cfg, frame);
    validate(sc);  // fail before touching the filesystem
    ensure_out_dir(opts.out_dir);

    const TimeSeries series = run_scenario(sc);
    write_run_artifacts(opts.out_dir, series);
    std::cout << "wrote " << opts.out_dir << "/{timeseries.csv,metrics.txt,fig_*.csv,fig_*.gp}"
              << " (" << frame_name(frame) << " frame, " << series.samples.size() << " rows)\n";
    return kExitOk;
}

int cmd_compare(const CommonOpts& opts) {
    const FullConfig cfg = load_effective_config(opts);
    const ScenarioConfig sc_ab = to_scenario(cfg, Frame::StationaryAB);
    const ScenarioConfig sc_dq = to_scenario(cfg, Frame::SynchronousDQ);
    validate(sc_ab);
    validate(sc_dq);
    ensure_out_dir(opts.out_dir + "/ab");
    ensure_out_dir(opts.out_dir + "/dq");

    const PairResult pair = run_pair(sc_ab, sc_dq);
    write_run_artifacts(opts.out_dir + "/ab", pair.ab);
    write_run_artifacts(opts.out_dir + "/dq", pair.dq);
    write_comparison_txt(opts.out_dir + "/comparison.txt", tracking_metrics(pair.ab),
                         tracking_metrics(pair.dq), cfg.plant.fsw <= 0.0);
    std::cout << "wrote " << opts.out_dir << "/{ab,dq}/* and " << opts.out_dir
              << "/comparison.txt\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-phase islanded microgrid inverter simulator (PR/alpha-beta vs PI/dq)"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string frame_flag;

    auto add_common = [&](CLI::App* sub, bool with_frame) {
        sub->add_option("--config", opts.config_path, "scenario config file (defaults built in)");
        sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
        sub->add_option("--fsw", opts.fsw_override,
                        "override switching frequency [Hz]; 0 = averaged model");
        sub->add_option("--t-end", opts.t_end_override, "override simulated duration [s]");
        if (with_frame)
            sub->add_option("--frame", frame_flag, "run a single frame: ab or dq");
    };

    CLI::App* run = app.add_subcommand("run", "run one scenario and write its artifacts");
    add_common(run, true);
    CLI::App* compare =
        app.add_subcommand("compare", "run both frames and write the comparison report");
    add_common(compare, false);
    app.add_subcommand("print-defaults", "print the built-in default config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("print-defaults")) {
            std::cout << print_config(default_config());
            return kExitOk;
        }
        if (app.got_subcommand("run")) return cmd_run(opts, frame_flag);
        return cmd_compare(opts);
    } catch (const NumericalDivergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
