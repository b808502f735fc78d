#include "mgsim/engine.hpp"

#include <cmath>
#include <algorithm>
#include <future>
#include <string>

#include "mgsim/errors.hpp"

namespace mgsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559005768;
constexpr double kStateLimit = 1e9;

bool state_sane(const PlantState& s) {
    for (int k = 0; k < 3; ++k) {
        if (!(std::fabs(s.il1[k]) <= kStateLimit)) return false;
        if (!(std::fabs(s.vc[k]) <= kStateLimit)) return false;
        if (!(std::fabs(s.il2[k]) <= kStateLimit)) return false;
    }
    return true;
}

long long substeps_per_control(const ScenarioConfig& cfg) {
    const double ratio = cfg.ts_control / cfg.h_plant;
    const long long n = std::llround(ratio);
    if (n < 1 || std::fabs(ratio - static_cast<double>(n)) > 1e-12 * ratio)
        throw ConfigError("ts_control must be an integer multiple of h_plant");
    return n;
}
}  // namespace

const char* frame_name(Frame f) {
    return f == Frame::StationaryAB ? "ab" : "dq";
}

void validate(const ScenarioConfig& cfg) {
    validate(cfg.plant);
    validate(cfg.droop);
    if (!(cfg.ts_control > 0.0)) throw ConfigError("ts_control must be > 0");
    if (!(cfg.h_plant > 0.0)) throw ConfigError("h_plant must be > 0");
    if (cfg.h_plant > cfg.ts_control) throw ConfigError("h_plant must be <= ts_control");
    substeps_per_control(cfg);
    if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be > 0");
    if (std::llround(cfg.t_end / cfg.ts_control) < 1)
        throw ConfigError("t_end rounds to zero control steps");
    if (cfg.record_decimation < 1) throw ConfigError("record_decimation must be >= 1");
    if (!(cfg.ramp_cycles >= 0.0)) throw ConfigError("ramp_cycles must be >= 0");

    if (cfg.frame == Frame::StationaryAB) {
        PrParams v = cfg.pr_voltage;
        PrParams i = cfg.pr_current;
        if (v.w0 <= 0.0) v.w0 = cfg.droop.omega_nom;
        if (i.w0 <= 0.0) i.w0 = cfg.droop.omega_nom;
        validate(v);
        validate(i);
        discretize_resonator(v, cfg.ts_control);  // rejects w0 >= Nyquist
        discretize_resonator(i, cfg.ts_control);
        validate(cfg.harmonic, v.w0, cfg.ts_control);
    } else {
        validate(cfg.pi_voltage);
        validate(cfg.pi_current);
    }
}

TimeSeries run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);

    const double ts = cfg.ts_control;
    const double h = cfg.h_plant;
    const long long n_steps = std::llround(cfg.t_end / ts);
    const long long n_sub = substeps_per_control(cfg);

    PrParams prv = cfg.pr_voltage;
    PrParams pri = cfg.pr_current;
    if (prv.w0 <= 0.0) prv.w0 = cfg.droop.omega_nom;
    if (pri.w0 <= 0.0) pri.w0 = cfg.droop.omega_nom;

    PrPair voltage_pr;
    PrPair current_pr;
    HarmonicCompPair harmonic;
    PiPair voltage_pi;
    PiPair current_pi;
    if (cfg.frame == Frame::StationaryAB) {
        voltage_pr = PrPair(prv, ts);
        current_pr = PrPair(pri, ts);
        harmonic = HarmonicCompPair(cfg.harmonic, prv.w0, prv.wc, ts);
    } else {
        voltage_pi = PiPair(cfg.pi_voltage, ts);
        current_pi = PiPair(cfg.pi_current, ts);
    }

    PlantState plant{};
    PowerMeasurement power{};
    ReferenceState ref{};
    const double ramp_time = cfg.ramp_cycles * kTwoPi / cfg.droop.omega_nom;

    TimeSeries out;
    out.config = cfg;
    out.samples.reserve(static_cast<size_t>(n_steps / cfg.record_decimation) + 1);

    int max_order = 1;
    for (const auto& term : cfg.harmonic) max_order = std::max(max_order, term.order);
    const double w_tune_limit = 0.95 * 3.141592653589793 / ts / max_order;

    for (long long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * ts;

        if (!state_sane(plant))
            throw NumericalDivergence(
                std::string(frame_name(cfg.frame)) +
                    " run diverged (plant state beyond 1e9) at t = " + std::to_string(t) + " s",
                t);

        const AlphaBeta v_ab = clarke({plant.vc[0], plant.vc[1], plant.vc[2]});
        const AlphaBeta i1_ab = clarke({plant.il1[0], plant.il1[1], plant.il1[2]});
        const AlphaBeta io_ab = clarke({plant.il2[0], plant.il2[1], plant.il2[2]});

        // Power measurement in the frame the stack runs in (both are rotation-invariant).
        PQ pq;
        if (cfg.frame == Frame::StationaryAB) {
            pq = power_ab(v_ab, io_ab);
        } else {
            pq = power_dq(park(v_ab, ref.theta), park(io_ab, ref.theta));
        }
        power_filter_step(power, pq.p, pq.q, cfg.droop.wf, ts);

        double omega = 0.0, e_cmd = 0.0;
        droop_law(power.p_filt, power.q_filt, cfg.droop, omega, e_cmd);
        const double ramp =
            (cfg.ramp_cycles > 0.0 && t < ramp_time) ? t / ramp_time : 1.0;
        const double e_applied = e_cmd * ramp;

        const AlphaBeta vref_ab = reference_step(ref, omega, e_applied, ts);

        SampleRecord rec;
        rec.t = t;
        rec.vc = {plant.vc[0], plant.vc[1], plant.vc[2]};
        rec.il1 = {plant.il1[0], plant.il1[1], plant.il1[2]};
        rec.il2 = {plant.il2[0], plant.il2[1], plant.il2[2]};
        rec.p_inst = power.p_inst;
        rec.q_inst = power.q_inst;
        rec.p_filt = power.p_filt;
        rec.q_filt = power.q_filt;
        rec.omega = omega;
        rec.e = e_applied;
        rec.theta = ref.theta;

        Abc v_cmd_abc;
        if (cfg.frame == Frame::StationaryAB) {
            // Hold the previous tuning when a blowing-up run drives omega out of the
            // representable band; the divergence check aborts shortly after.
            if (cfg.pr_track_frequency && omega > 0.0 && omega < w_tune_limit) {
                voltage_pr.tune(omega);
                current_pr.tune(omega);
                if (harmonic.enabled()) harmonic.tune(omega);
            }
            AlphaBeta iref = voltage_loop_ab(vref_ab, v_ab, voltage_pr);
            if (harmonic.enabled()) {
                const AlphaBeta hc = harmonic.step(
                    {vref_ab.alpha - v_ab.alpha, vref_ab.beta - v_ab.beta});
                iref.alpha += hc.alpha;
                iref.beta += hc.beta;
            }
            const AlphaBeta v_cmd = current_loop_ab(iref, i1_ab, current_pr);
            v_cmd_abc = inv_clarke(v_cmd);
            rec.vref = {vref_ab.alpha, vref_ab.beta};
            rec.vmeas = {v_ab.alpha, v_ab.beta};
            rec.iref = {iref.alpha, iref.beta};
            rec.imeas = {i1_ab.alpha, i1_ab.beta};
        } else {
            const Dq v_dq = park(v_ab, ref.theta);
            const Dq i1_dq = park(i1_ab, ref.theta);
            const Dq io_dq = park(io_ab, ref.theta);
            const Dq vref_dq{e_applied, 0.0};
            const Dq iref = voltage_loop_dq(vref_dq, v_dq, io_dq, voltage_pi, omega,
                                            cfg.plant.c);
            const Dq v_cmd_dq = current_loop_dq(iref, i1_dq, v_dq, current_pi, omega,
                                                cfg.plant.l1);
            v_cmd_abc = inv_clarke(inv_park(v_cmd_dq, ref.theta));
            rec.vref = {vref_dq.d, vref_dq.q};
            rec.vmeas = {v_dq.d, v_dq.q};
            rec.iref = {iref.d, iref.q};
            rec.imeas = {i1_dq.d, i1_dq.q};
        }

        for (long long j = 0; j < n_sub; ++j) {
            const double tt = t + static_cast<double>(j) * h;
            const Abc v_inv = pwm_stage(v_cmd_abc, cfg.plant, tt);
            plant = rk4_step(plant, v_inv, cfg.plant, h);
        }

        if (!state_sane(plant))
            throw NumericalDivergence(
                std::string(frame_name(cfg.frame)) +
                    " run diverged (plant state beyond 1e9) at t = " + std::to_string(t + ts) +
                    " s",
                t + ts);

        if (k % cfg.record_decimation == 0) out.samples.push_back(rec);
    }

    return out;
}

PairResult run_pair(const ScenarioConfig& cfg_a, const ScenarioConfig& cfg_b) {
    if (cfg_a.frame == cfg_b.frame)
        throw ConfigError("run_pair needs one stationary-frame and one synchronous-frame config");

    const ScenarioConfig& ab = cfg_a.frame == Frame::StationaryAB ? cfg_a : cfg_b;
    const ScenarioConfig& dq = cfg_a.frame == Frame::SynchronousDQ ? cfg_a : cfg_b;

    const PlantParams &pa = ab.plant, &pb = dq.plant;
    if (pa.l1 != pb.l1 || pa.c != pb.c || pa.l2 != pb.l2 || pa.r_load != pb.r_load ||
        pa.vdc != pb.vdc || pa.fsw != pb.fsw)
        throw ConfigError("run_pair: plant parameters differ between the two configs");
    const DroopParams &da = ab.droop, &db = dq.droop;
    if (da.kw != db.kw || da.kv != db.kv || da.omega_nom != db.omega_nom ||
        da.e_nom != db.e_nom || da.wf != db.wf)
        throw ConfigError("run_pair: droop parameters differ between the two configs");

    auto fut = std::async(std::launch::async, [&ab] { return run_scenario(ab); });
    TimeSeries dq_series = run_scenario(dq);
    return {fut.get(), std::move(dq_series)};
}

}  // namespace mgsim
