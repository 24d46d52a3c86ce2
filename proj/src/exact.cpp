#include "flywheel/exact.hpp"

#include <cmath>

#include "simulate_common.hpp"

namespace flywheel {

SlotEnergy slot_energy_exact(double p_in_w, double p_prev_w, const FlywheelParams& params) {
    const SlotTransition tr = classify_transition(p_in_w, p_prev_w, params.delta_s,
                                                  params.t_cont_s, params.e_c, params.e_d);
    const ModelCoefficients co = coefficients(params.t_loss_s, params.t_cont_s, params.delta_s);
    const double dp = p_in_w - p_prev_w;
    // 1 - gamma without cancellation when delta << t_loss.
    const double loss_frac = -std::expm1(-params.delta_s / params.t_loss_s);

    SlotEnergy out;
    out.case_tag = tr.case_tag;

    if (tr.case_tag == TransitionCase::OppositeSwitch) {
        out.branch = SlotFormula::SplitEfficiency;
        // Split form, regrouped so each term stays well conditioned:
        //   gamma * (gamma^-1 eta_in - eta_prev)      = eta_in * (1 - gamma)
        //                                              + gamma * (eta_in - eta_prev)
        //   gamma * exp(delta * q)                    = exp(-delta / t_cont)
        const double filter_tail = std::exp(-params.delta_s / params.t_cont_s);
        const double kink_pow = std::pow(dp / p_in_w, params.t_cont_s / params.t_loss_s);
        out.value_j = co.gamma * co.p_coef_s * (tr.eta_prev - tr.eta_in) * p_in_w * kink_pow +
                      p_in_w * params.t_loss_s *
                          (tr.eta_in * loss_frac + co.gamma * (tr.eta_in - tr.eta_prev)) -
                      (dp / co.q_coef_inv_s) * (tr.eta_in * filter_tail - co.gamma * tr.eta_prev);
    } else {
        out.branch = SlotFormula::SingleEfficiency;
        const double eta = case_efficiency(tr);
        out.value_j = eta * (p_in_w * params.t_loss_s * loss_frac -
                             (dp / co.q_coef_inv_s) * co.gamma *
                                 std::expm1(params.delta_s * co.q_coef_inv_s));
    }
    return out;
}

double step_exact(double e_prev_j, double p_in_w, double p_prev_w, const FlywheelParams& params) {
    return self_discharge_factor(params.delta_s, params.t_loss_s) * e_prev_j +
           slot_energy_exact(p_in_w, p_prev_w, params).value_j;
}

EnergyTrace simulate_exact(const PowerProfile& profile, const FlywheelParams& params,
                           SimMode mode) {
    validate_params(params);
    validate_profile(profile, params);
    return detail::run_slot_recursion(profile, params, mode, [&](double p_in, double p_prev) {
        return slot_energy_exact(p_in, p_prev, params).value_j;
    });
}

} // namespace flywheel
