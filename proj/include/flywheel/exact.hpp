#pragma once

#include "flywheel/trace.hpp"

namespace flywheel {

/// Which closed form produced a slot energy: the two-efficiency form that
/// splits the slot at the filtered-power zero crossing, or the
/// single-efficiency form used for every non-switching case.
enum class SlotFormula {
    SplitEfficiency,
    SingleEfficiency,
};

/// Energy absorbed (positive) or supplied (negative) during one slot,
/// including the intra-slot self-discharge weighting.
struct SlotEnergy {
    double value_j = 0.0;
    TransitionCase case_tag = TransitionCase::ZeroIn;
    SlotFormula branch = SlotFormula::SingleEfficiency;
};

/// Closed-form slot energy with loss weighting: the integral over one slot
/// of the filtered mechanical power times exp(-(delta - t) / t_loss).
/// Uses the two-efficiency form iff the transition is OppositeSwitch.
SlotEnergy slot_energy_exact(double p_in_w, double p_prev_w, const FlywheelParams& params);

/// One step of the slot recursion: gamma * e_prev + slot energy.
/// No clamping; saturation handling belongs to the caller.
double step_exact(double e_prev_j, double p_in_w, double p_prev_w, const FlywheelParams& params);

/// Runs the slot recursion over a whole profile, starting from e_init_j.
/// Slot k takes p_prev from slot k-1 (p_prev_init_w for the first slot).
EnergyTrace simulate_exact(const PowerProfile& profile, const FlywheelParams& params,
                           SimMode mode = SimMode::Unconstrained);

} // namespace flywheel
