#include "mgsim/control.hpp"

#include <cmath>
#include <set>
#include <string>

#include "mgsim/errors.hpp"

namespace mgsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// Tustin with prewarp at wr: s -> K (z-1)/(z+1), K = wr / tan(wr*ts/2).
// Applied to G(s) = ki*s / (s^2 + 2*wc*s + wr^2):
//   num: ki*K (z^2 - 1)
//   den: (K^2 + 2*wc*K + wr^2) z^2 + (2*wr^2 - 2*K^2) z + (K^2 - 2*wc*K + wr^2)
SosCoeffs bilinear_resonator(double ki, double wr, double wc, double ts) {
    if (!(ts > 0.0)) throw ConfigError("resonator: ts must be > 0");
    if (!(wr > 0.0)) throw ConfigError("resonator: resonant frequency must be > 0");
    if (wr >= kPi / ts)
        throw ConfigError("resonator: resonant frequency " + std::to_string(wr) +
                          " rad/s at or above Nyquist " + std::to_string(kPi / ts) + " rad/s");
    const double K = wr / std::tan(0.5 * wr * ts);
    const double a0 = K * K + 2.0 * wc * K + wr * wr;
    SosCoeffs c;
    c.b0 = ki * K / a0;
    c.b1 = 0.0;
    c.b2 = -ki * K / a0;
    c.a1 = (2.0 * wr * wr - 2.0 * K * K) / a0;
    c.a2 = (K * K - 2.0 * wc * K + wr * wr) / a0;
    return c;
}
}  // namespace

void validate(const PrParams& p) {
    if (!(p.kp >= 0.0)) throw ConfigError("PrParams: kp must be >= 0");
    if (!(p.ki >= 0.0)) throw ConfigError("PrParams: ki must be >= 0");
    if (!(p.w0 > 0.0)) throw ConfigError("PrParams: w0 must be > 0");
    if (!(p.wc > 0.0)) throw ConfigError("PrParams: wc must be > 0");
    if (!(p.wc < p.w0)) throw ConfigError("PrParams: wc must be < w0");
}

void validate(const PiParams& p) {
    if (!(p.kp >= 0.0)) throw ConfigError("PiParams: kp must be >= 0");
    if (!(p.ki >= 0.0)) throw ConfigError("PiParams: ki must be >= 0");
}

void validate(const HarmonicCompParams& p, double w0, double ts) {
    std::set<int> orders;
    for (const auto& term : p) {
        if (term.order <= 1) throw ConfigError("harmonic compensator: order must be > 1");
        if (!(term.ki >= 0.0)) throw ConfigError("harmonic compensator: gain must be >= 0");
        if (!orders.insert(term.order).second)
            throw ConfigError("harmonic compensator: duplicate order " +
                              std::to_string(term.order));
        if (term.order * w0 >= kPi / ts)
            throw ConfigError("harmonic compensator: order " + std::to_string(term.order) +
                              " aliases (h*w0 >= pi/ts)");
    }
}

SosCoeffs discretize_resonator(const PrParams& p, double ts) {
    return bilinear_resonator(p.ki, p.w0, p.wc, ts);
}

SosCoeffs discretize_harmonic(const HarmonicTerm& term, double w0, double wc, double ts) {
    return bilinear_resonator(term.ki, term.order * w0, wc, ts);
}

double pr_step(ResonatorState& state, double error, const PrParams& p, double ts) {
    const SosCoeffs c = discretize_resonator(p, ts);
    return p.kp * error + state.step(c, error);
}

double pi_step(IntegratorState& state, double error, const PiParams& p, double ts) {
    state.acc += 0.5 * ts * (state.prev_error + error);
    state.prev_error = error;
    return p.kp * error + p.ki * state.acc;
}

double harmonic_comp_step(std::vector<ResonatorState>& states, double error,
                          const HarmonicCompParams& p, double w0, double wc, double ts) {
    validate(p, w0, ts);
    states.resize(p.size());
    double out = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const SosCoeffs c = discretize_harmonic(p[i], w0, wc, ts);
        out += states[i].step(c, error);
    }
    return out;
}

PrPair::PrPair(const PrParams& params, double ts) : params_(params), ts_(ts) {
    validate(params_);
    coeffs_ = discretize_resonator(params_, ts_);
}

void PrPair::tune(double w0) {
    if (w0 == params_.w0) return;
    params_.w0 = w0;
    coeffs_ = discretize_resonator(params_, ts_);
}

AlphaBeta PrPair::step(const AlphaBeta& error) {
    return {
        params_.kp * error.alpha + s1_.step(coeffs_, error.alpha),
        params_.kp * error.beta + s2_.step(coeffs_, error.beta),
    };
}

HarmonicCompPair::HarmonicCompPair(const HarmonicCompParams& params, double w0, double wc,
                                   double ts)
    : params_(params), wc_(wc), ts_(ts) {
    validate(params_, w0, ts_);
    coeffs_.resize(params_.size());
    s1_.resize(params_.size());
    s2_.resize(params_.size());
    for (size_t i = 0; i < params_.size(); ++i)
        coeffs_[i] = discretize_harmonic(params_[i], w0, wc_, ts_);
}

void HarmonicCompPair::tune(double w0) {
    for (size_t i = 0; i < params_.size(); ++i)
        coeffs_[i] = discretize_harmonic(params_[i], w0, wc_, ts_);
}

AlphaBeta HarmonicCompPair::step(const AlphaBeta& error) {
    AlphaBeta out{};
    for (size_t i = 0; i < params_.size(); ++i) {
        out.alpha += s1_[i].step(coeffs_[i], error.alpha);
        out.beta += s2_[i].step(coeffs_[i], error.beta);
    }
    return out;
}

AlphaBeta voltage_loop_ab(const AlphaBeta& vref, const AlphaBeta& vc, PrPair& pr) {
    return pr.step({vref.alpha - vc.alpha, vref.beta - vc.beta});
}

AlphaBeta current_loop_ab(const AlphaBeta& iref, const AlphaBeta& il1, PrPair& pr) {
    return pr.step({iref.alpha - il1.alpha, iref.beta - il1.beta});
}

Dq voltage_loop_dq(const Dq& vref, const Dq& vc, const Dq& io, PiPair& pi, double omega,
                   double c_f) {
    const Dq u = pi.step({vref.d - vc.d, vref.q - vc.q});
    return {
        u.d - omega * c_f * vc.q + io.d,
        u.q + omega * c_f * vc.d + io.q,
    };
}

Dq current_loop_dq(const Dq& iref, const Dq& il1, const Dq& vc, PiPair& pi, double omega,
                   double l1) {
    const Dq u = pi.step({iref.d - il1.d, iref.q - il1.q});
    return {
        u.d - omega * l1 * il1.q + vc.d,
        u.q + omega * l1 * il1.d + vc.q,
    };
}

}  // namespace mgsim
