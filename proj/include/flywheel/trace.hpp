#pragma once

#include <vector>

#include "flywheel/transition.hpp"

namespace flywheel {

/// Whether a simulation clamps stored energy to [0, e_cap] after each slot
/// or lets it run free. Exceedance is flagged either way.
enum class SimMode {
    Unconstrained,
    Clamp,
};

/// One sampled point of a simulation: stored energy at t = slot * delta.
struct TraceEntry {
    int slot = 0;
    double t_s = 0.0;
    double e_j = 0.0;
};

/// Slot-boundary energies plus per-slot transition classification and
/// saturation flags. `entries` has K+1 rows (the initial state first);
/// `transitions` and `saturated` have one element per slot, aligned with
/// entries[1..K]. A saturation flag records that the pre-clamp energy left
/// [0, e_cap] during that slot.
struct EnergyTrace {
    std::vector<TraceEntry> entries;
    std::vector<SlotTransition> transitions;
    std::vector<bool> saturated;

    std::size_t slot_count() const { return transitions.size(); }

    /// Energies only, in slot order (K+1 values).
    std::vector<double> energies() const;
};

} // namespace flywheel
