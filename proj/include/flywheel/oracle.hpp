#pragma once

#include "flywheel/trace.hpp"

namespace flywheel {

/// Tuning for the brute-force reference paths. Defaults are accurate enough
/// to validate the closed forms at 1e-8 relative.
struct OracleConfig {
    double quad_tol = 1e-12;       ///< relative tolerance of the adaptive quadrature
    int substeps_per_slot = 1000;  ///< fixed RK4 steps per slot
    bool split_at_t_change = true; ///< integrate the filtered-power kink as two intervals
};

/// Adaptive quadrature of the slot-energy integral: filtered mechanical
/// power times exp(-(delta - t) / t_loss) when `weighted`, or times 1 when
/// not (the approximate-method integrand). The interval is split at the
/// filtered-power zero crossing so each piece is smooth. Throws NumericError
/// if the tolerance cannot be reached within the refinement cap.
double quadrature_slot_energy(double p_in_w, double p_prev_w, const FlywheelParams& params,
                              bool weighted, const OracleConfig& config = {});

/// Fixed-step RK4 integration of dE/dt = p_mech(t) - E / t_loss over the
/// whole profile, with the filter restarted from p_prev at each slot
/// boundary (the same slot-boundary assumption the closed forms make).
/// Returns slot-boundary samples.
EnergyTrace integrate_ode(const PowerProfile& profile, const FlywheelParams& params,
                          const OracleConfig& config = {});

/// Joint RK4 integration of the filter state y' = (p_in - y) / t_cont and
/// dE/dt = eta(y) * y - E / t_loss, with y carried across slot boundaries
/// instead of being reset. Differs from integrate_ode exactly where the
/// slot-boundary steady-state assumption bites; y(0) = p_prev_init_w.
EnergyTrace integrate_physical(const PowerProfile& profile, const FlywheelParams& params,
                               const OracleConfig& config = {});

/// Naive evolution E_k = E_{k-1} + eta * p_in * delta: no self-discharge,
/// no controller filtering. Kept as the comparison baseline.
EnergyTrace simulate_baseline(const PowerProfile& profile, const FlywheelParams& params);

} // namespace flywheel
