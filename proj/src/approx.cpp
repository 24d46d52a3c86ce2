#include "flywheel/approx.hpp"

#include <algorithm>
#include <cmath>

#include "flywheel/exact.hpp"
#include "simulate_common.hpp"

namespace flywheel {

double slot_energy_approx(double p_in_w, double p_prev_w, const FlywheelParams& params,
                          ApproxMode mode) {
    const SlotTransition tr = classify_transition(p_in_w, p_prev_w, params.delta_s,
                                                  params.t_cont_s, params.e_c, params.e_d);
    const double dp = p_in_w - p_prev_w;

    double value;
    double tail_eta;
    if (tr.case_tag == TransitionCase::OppositeSwitch) {
        const double t_change = *tr.t_change_s;
        value = tr.eta_prev * (p_in_w * t_change + p_prev_w * params.t_cont_s) +
                tr.eta_in * (p_in_w * (params.delta_s - t_change - params.t_cont_s));
        tail_eta = tr.eta_in;
    } else {
        const double eta = case_efficiency(tr);
        value = eta * (p_in_w * (params.delta_s - params.t_cont_s) + p_prev_w * params.t_cont_s);
        tail_eta = eta;
    }
    if (mode == ApproxMode::Full) {
        value += tail_eta * dp * params.t_cont_s * std::exp(-params.delta_s / params.t_cont_s);
    }
    return value;
}

EnergyTrace simulate_approx(const PowerProfile& profile, const FlywheelParams& params,
                            ApproxMode mode, SimMode sim_mode) {
    validate_params(params);
    validate_profile(profile, params);
    return detail::run_slot_recursion(profile, params, sim_mode, [&](double p_in, double p_prev) {
        return slot_energy_approx(p_in, p_prev, params, mode);
    });
}

double error_bound(std::size_t k, double delta_s, double t_loss_s, const PowerProfile& profile,
                   double e_d) {
    if (profile.powers_w.empty()) {
        throw ValidationError("error_bound requires a non-empty profile");
    }
    if (delta_s <= 0.0 || t_loss_s <= 0.0) {
        throw ValidationError("error_bound requires positive delta_s and t_loss_s");
    }
    // Commanded power over [0, t_k]: slots 1..k plus the slot starting at t_k.
    const std::size_t last = std::min(k, profile.powers_w.size() - 1);
    double p_max = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        p_max = std::max(p_max, std::abs(profile.powers_w[i]));
    }
    const double r_max = e_d * p_max;
    const double growth =
        -std::expm1(-(static_cast<double>(k) + 1.0) * delta_s / t_loss_s);
    return growth * r_max * delta_s;
}

bool BoundReport::all_satisfied() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const BoundEntry& e) { return e.satisfied; });
}

BoundReport check_bound(const PowerProfile& profile, const FlywheelParams& params,
                        ApproxMode mode) {
    // The bound's derivation assumes the unconstrained recursion; clamping
    // would invalidate it, so both traces run unconstrained here.
    const EnergyTrace exact = simulate_exact(profile, params, SimMode::Unconstrained);
    const EnergyTrace approx = simulate_approx(profile, params, mode, SimMode::Unconstrained);

    constexpr double kSlackJ = 1e-9;

    BoundReport report;
    report.entries.reserve(exact.entries.size());
    double p_max = 0.0;
    for (std::size_t k = 0; k < exact.entries.size(); ++k) {
        const std::size_t last = std::min(k, profile.powers_w.size() - 1);
        p_max = std::max(p_max, std::abs(profile.powers_w[last]));
        const double gap = std::abs(exact.entries[k].e_j - approx.entries[k].e_j);
        const double growth = -std::expm1(-(static_cast<double>(k) + 1.0) * params.delta_s /
                                          params.t_loss_s);
        const double bound = growth * params.e_d * p_max * params.delta_s;
        report.entries.push_back(
            {static_cast<int>(k), gap, bound, gap <= bound + kSlackJ});
    }
    double p_horizon = 0.0;
    for (const double p : profile.powers_w) {
        p_horizon = std::max(p_horizon, std::abs(p));
    }
    report.r_max_w = params.e_d * p_horizon;
    report.asymptotic_bound_j = report.r_max_w * params.delta_s;
    return report;
}

} // namespace flywheel
