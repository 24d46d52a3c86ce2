#pragma once

#include <vector>

#include "flywheel/errors.hpp"

namespace flywheel {

/// Physical and model constants of one flywheel storage unit.
///
/// All quantities are SI (seconds, joules, watts); efficiencies are
/// dimensionless multipliers in (0, 1].
struct FlywheelParams {
    double t_loss_s = 0.0;      ///< self-discharge time constant
    double t_cont_s = 0.0;      ///< power-controller / machine time constant
    double e_c = 1.0;           ///< charging efficiency
    double e_d = 1.0;           ///< discharging efficiency
    double e_init_j = 0.0;      ///< stored energy at t = 0
    double e_cap_j = 0.0;       ///< storage capacity
    double p_rated_w = 0.0;     ///< rated power magnitude
    double delta_s = 0.0;       ///< slot duration
    double p_prev_init_w = 0.0; ///< assumed input power before the first slot
};

/// Per-slot constant grid power commands.
struct PowerProfile {
    double delta_s = 0.0;          ///< slot duration, must match the params it runs against
    std::vector<double> powers_w;  ///< commanded input power for slots 1..K
};

/// Checks every FlywheelParams invariant; returns the params unchanged.
/// Throws ValidationError with a message naming the violated constraint.
/// The closed-form coefficients are singular at t_cont == t_loss, so the
/// relative spacing |t_cont - t_loss| / t_loss must exceed 1e-9.
const FlywheelParams& validate_params(const FlywheelParams& params);

/// Checks a profile against validated params: non-empty, matching slot
/// duration, and |power| <= p_rated_w for every slot (reported by slot index).
const PowerProfile& validate_profile(const PowerProfile& profile, const FlywheelParams& params);

/// Self-discharge time constant of a flywheel with inertia `inertia_kg_m2`
/// whose speed-squared loss factor is `loss_factor`.
double loss_time_constant(double inertia_kg_m2, double loss_factor);

/// Kinetic energy stored at rotational speed `omega_rad_s`.
double energy_of_speed(double inertia_kg_m2, double omega_rad_s);

/// Rotational speed holding stored energy `energy_j`; inverse of energy_of_speed.
double speed_of_energy(double inertia_kg_m2, double energy_j);

} // namespace flywheel
