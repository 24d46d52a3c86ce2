#include "flywheel/transition.hpp"

#include <cmath>
#include <stdexcept>

namespace flywheel {

std::string to_string(TransitionCase c) {
    switch (c) {
    case TransitionCase::ZeroIn: return "zero_in";
    case TransitionCase::ZeroPrev: return "zero_prev";
    case TransitionCase::SameSign: return "same_sign";
    case TransitionCase::OppositeNoSwitch: return "opposite_no_switch";
    case TransitionCase::OppositeSwitch: return "opposite_switch";
    }
    return "?";
}

SlotTransition classify_transition(double p_in_w, double p_prev_w, double delta_s,
                                   double t_cont_s, double e_c, double e_d) {
    SlotTransition tr;
    tr.eta_in = (p_in_w >= 0.0) ? e_c : e_d;
    tr.eta_prev = (p_prev_w >= 0.0) ? e_c : e_d;
    tr.eta_eff = (std::abs(p_in_w) > std::abs(p_prev_w)) ? tr.eta_in : tr.eta_prev;

    if (p_in_w == 0.0) {
        tr.case_tag = TransitionCase::ZeroIn;
    } else if (p_prev_w == 0.0) {
        tr.case_tag = TransitionCase::ZeroPrev;
    } else if ((p_in_w > 0.0) == (p_prev_w > 0.0)) {
        tr.case_tag = TransitionCase::SameSign;
    } else {
        // Opposite signs: the filtered power starts at p_prev and crosses
        // zero at t_change = -t_cont * ln(p_in / (p_in - p_prev)). The
        // crossing lands inside the slot iff the ratio exceeds
        // exp(-delta / t_cont).
        const double ratio = p_in_w / (p_in_w - p_prev_w);
        if (ratio > std::exp(-delta_s / t_cont_s)) {
            tr.case_tag = TransitionCase::OppositeSwitch;
            tr.t_change_s = -t_cont_s * std::log(ratio);
        } else {
            tr.case_tag = TransitionCase::OppositeNoSwitch;
        }
    }
    return tr;
}

double case_efficiency(const SlotTransition& transition) {
    switch (transition.case_tag) {
    case TransitionCase::ZeroPrev:
    case TransitionCase::SameSign:
        return transition.eta_in;
    case TransitionCase::ZeroIn:
    case TransitionCase::OppositeNoSwitch:
        return transition.eta_prev;
    case TransitionCase::OppositeSwitch:
        break;
    }
    throw std::logic_error("case_efficiency: switching transition has no single efficiency");
}

double filtered_mech_power(double t_s, double p_in_w, double p_prev_w, double t_cont_s,
                           double e_c, double e_d) {
    const double response = p_in_w - (p_in_w - p_prev_w) * std::exp(-t_s / t_cont_s);
    return (response >= 0.0 ? e_c : e_d) * response;
}

double self_discharge_factor(double delta_s, double t_loss_s) {
    return std::exp(-delta_s / t_loss_s);
}

ModelCoefficients coefficients(double t_loss_s, double t_cont_s, double delta_s) {
    if (t_loss_s <= 0.0 || t_cont_s <= 0.0 || delta_s <= 0.0) {
        throw ValidationError("coefficients require positive time constants and slot duration");
    }
    if (std::abs(t_cont_s - t_loss_s) / t_loss_s <= 1e-9) {
        throw ValidationError("coefficient singularity: t_cont_s must differ from t_loss_s");
    }
    ModelCoefficients co;
    co.gamma = self_discharge_factor(delta_s, t_loss_s);
    co.q_coef_inv_s = (t_cont_s - t_loss_s) / (t_loss_s * t_cont_s);
    co.p_coef_s = t_loss_s - t_loss_s * t_cont_s / (t_cont_s - t_loss_s);
    return co;
}

} // namespace flywheel
