#pragma once

#include <utility>

#include "flywheel/trace.hpp"

namespace flywheel::detail {

// Shared slot recursion: E_k = gamma * E_{k-1} + slot_energy(p_in, p_prev).
// `slot_energy` is invoked once per slot in order. Clamping (when requested)
// applies after each step so the carried state stays within [0, e_cap].
template <typename SlotEnergyFn>
EnergyTrace run_slot_recursion(const PowerProfile& profile, const FlywheelParams& params,
                               SimMode mode, SlotEnergyFn&& slot_energy) {
    const std::size_t slots = profile.powers_w.size();
    EnergyTrace trace;
    trace.entries.reserve(slots + 1);
    trace.transitions.reserve(slots);
    trace.saturated.reserve(slots);

    const double gamma = self_discharge_factor(params.delta_s, params.t_loss_s);
    double energy = params.e_init_j;
    trace.entries.push_back({0, 0.0, energy});

    for (std::size_t k = 1; k <= slots; ++k) {
        const double p_in = profile.powers_w[k - 1];
        const double p_prev = (k == 1) ? params.p_prev_init_w : profile.powers_w[k - 2];
        trace.transitions.push_back(classify_transition(p_in, p_prev, params.delta_s,
                                                        params.t_cont_s, params.e_c, params.e_d));
        energy = gamma * energy + slot_energy(p_in, p_prev);
        const bool exceeded = energy < 0.0 || energy > params.e_cap_j;
        trace.saturated.push_back(exceeded);
        if (mode == SimMode::Clamp && exceeded) {
            energy = energy < 0.0 ? 0.0 : params.e_cap_j;
        }
        trace.entries.push_back({static_cast<int>(k), static_cast<double>(k) * params.delta_s,
                                 energy});
    }
    return trace;
}

} // namespace flywheel::detail
