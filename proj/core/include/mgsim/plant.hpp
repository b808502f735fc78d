#pragma once

#include <array>

#include "mgsim/transforms.hpp"

namespace mgsim {

/// LCL filter, resistive load, and modulator parameters (per phase, wye, floating neutral).
struct PlantParams {
    double l1 = 0.0;      ///< inverter-side inductance [H]
    double c = 0.0;       ///< filter capacitance [F]
    double l2 = 0.0;      ///< load-side inductance [H]
    double r_load = 0.0;  ///< load resistance [ohm]
    double vdc = 0.0;     ///< DC-link voltage [V]
    double fsw = 0.0;     ///< switching frequency [Hz]; 0 selects the averaged model
};

/// Nine continuous states of the per-phase LCL + load circuit, all zero at start.
struct PlantState {
    std::array<double, 3> il1{};  ///< inverter-side inductor currents [A]
    std::array<double, 3> vc{};   ///< capacitor voltages [V]
    std::array<double, 3> il2{};  ///< load-side inductor currents [A]
};

// Per phase k:
//   d(il1)/dt = (v_inv - vc) / l1
//   d(vc)/dt  = (il1 - il2) / c
//   d(il2)/dt = (vc - r_load*il2) / l2
PlantState plant_derivatives(const PlantState& s, const Abc& v_inv, const PlantParams& p);

/// Classical RK4 advance with v_inv held constant over the step.
PlantState rk4_step(const PlantState& s, const Abc& v_inv, const PlantParams& p, double h);

/// Symmetric triangle carrier in [-1, 1], period 1/fsw, starting at -1 and rising.
double triangle_carrier(double t, double fsw);

/// Averaged mode (fsw = 0): clamp(v_cmd, +-vdc/2).
/// Switching mode: per phase, +vdc/2 when v_cmd/(vdc/2) >= carrier(t), else -vdc/2.
Abc pwm_stage(const Abc& v_cmd, const PlantParams& p, double t);

/// Stored energy (1/2)(l1*sum il1^2 + c*sum vc^2 + l2*sum il2^2).
double stored_energy(const PlantState& s, const PlantParams& p);

void validate(const PlantParams& p);

}  // namespace mgsim
