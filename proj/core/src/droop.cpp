#include "mgsim/droop.hpp"

#include <cmath>

#include "mgsim/errors.hpp"

namespace mgsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559005768;
}

void power_filter_step(PowerMeasurement& m, double p_inst, double q_inst, double wf,
                       double ts) {
    m.p_inst = p_inst;
    m.q_inst = q_inst;
    m.p_filt += wf * ts * (p_inst - m.p_filt);
    m.q_filt += wf * ts * (q_inst - m.q_filt);
}

AlphaBeta reference_step(ReferenceState& s, double omega, double e, double ts) {
    s.theta += omega * ts;
    if (s.theta >= kTwoPi || s.theta < 0.0) s.theta -= kTwoPi * std::floor(s.theta / kTwoPi);
    s.e = e;
    return {e * std::cos(s.theta), e * std::sin(s.theta)};
}

void validate(const DroopParams& d) {
    if (!(d.kw >= 0.0)) throw ConfigError("DroopParams: kw must be >= 0");
    if (!(d.kv >= 0.0)) throw ConfigError("DroopParams: kv must be >= 0");
    if (!(d.omega_nom > 0.0)) throw ConfigError("DroopParams: omega_nom must be > 0");
    if (!(d.e_nom > 0.0)) throw ConfigError("DroopParams: e_nom must be > 0");
    if (!(d.wf > 0.0)) throw ConfigError("DroopParams: wf must be > 0");
}

}  // namespace mgsim
