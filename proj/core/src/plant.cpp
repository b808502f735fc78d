#include "mgsim/plant.hpp"

#include <cmath>

#include "mgsim/errors.hpp"

namespace mgsim {

PlantState plant_derivatives(const PlantState& s, const Abc& v_inv, const PlantParams& p) {
    const std::array<double, 3> v{v_inv.a, v_inv.b, v_inv.c};
    PlantState d;
    for (int k = 0; k < 3; ++k) {
        d.il1[k] = (v[k] - s.vc[k]) / p.l1;
        d.vc[k] = (s.il1[k] - s.il2[k]) / p.c;
        d.il2[k] = (s.vc[k] - p.r_load * s.il2[k]) / p.l2;
    }
    return d;
}

namespace {
PlantState axpy(const PlantState& s, const PlantState& d, double h) {
    PlantState r;
    for (int k = 0; k < 3; ++k) {
        r.il1[k] = s.il1[k] + h * d.il1[k];
        r.vc[k] = s.vc[k] + h * d.vc[k];
        r.il2[k] = s.il2[k] + h * d.il2[k];
    }
    return r;
}
}  // namespace

PlantState rk4_step(const PlantState& s, const Abc& v_inv, const PlantParams& p, double h) {
    const PlantState k1 = plant_derivatives(s, v_inv, p);
    const PlantState k2 = plant_derivatives(axpy(s, k1, 0.5 * h), v_inv, p);
    const PlantState k3 = plant_derivatives(axpy(s, k2, 0.5 * h), v_inv, p);
    const PlantState k4 = plant_derivatives(axpy(s, k3, h), v_inv, p);
    PlantState r;
    for (int k = 0; k < 3; ++k) {
        r.il1[k] = s.il1[k] + h / 6.0 * (k1.il1[k] + 2.0 * k2.il1[k] + 2.0 * k3.il1[k] + k4.il1[k]);
        r.vc[k] = s.vc[k] + h / 6.0 * (k1.vc[k] + 2.0 * k2.vc[k] + 2.0 * k3.vc[k] + k4.vc[k]);
        r.il2[k] = s.il2[k] + h / 6.0 * (k1.il2[k] + 2.0 * k2.il2[k] + 2.0 * k3.il2[k] + k4.il2[k]);
    }
    return r;
}

double triangle_carrier(double t, double fsw) {
    const double frac = t * fsw - std::floor(t * fsw);
    return frac < 0.5 ? 4.0 * frac - 1.0 : 3.0 - 4.0 * frac;
}

Abc pwm_stage(const Abc& v_cmd, const PlantParams& p, double t) {
    const double half = 0.5 * p.vdc;
    if (p.fsw <= 0.0) {
        auto clamp = [half](double v) { return v > half ? half : (v < -half ? -half : v); };
        return {clamp(v_cmd.a), clamp(v_cmd.b), clamp(v_cmd.c)};
    }
    const double carrier = triangle_carrier(t, p.fsw);
    auto sw = [&](double v) { return v / half >= carrier ? half : -half; };
    return {sw(v_cmd.a), sw(v_cmd.b), sw(v_cmd.c)};
}

double stored_energy(const PlantState& s, const PlantParams& p) {
    double e = 0.0;
    for (int k = 0; k < 3; ++k) {
        e += 0.5 * p.l1 * s.il1[k] * s.il1[k];
        e += 0.5 * p.c * s.vc[k] * s.vc[k];
        e += 0.5 * p.l2 * s.il2[k] * s.il2[k];
    }
    return e;
}

void validate(const PlantParams& p) {
    if (!(p.l1 > 0.0)) throw ConfigError("PlantParams: l1 must be > 0");
    if (!(p.c > 0.0)) throw ConfigError("PlantParams: c must be > 0");
    if (!(p.l2 > 0.0)) throw ConfigError("PlantParams: l2 must be > 0");
    if (!(p.r_load > 0.0)) throw ConfigError("PlantParams: r_load must be > 0");
    if (p.fsw > 0.0 && !(p.vdc > 0.0))
        throw ConfigError("PlantParams: vdc must be > 0 in switching mode");
    if (!(p.vdc > 0.0)) throw ConfigError("PlantParams: vdc must be > 0");
    if (!(p.fsw >= 0.0)) throw ConfigError("PlantParams: fsw must be >= 0");
}

}  // namespace mgsim
