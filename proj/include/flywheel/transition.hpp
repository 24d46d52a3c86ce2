#pragma once

#include <optional>
#include <string>

#include "flywheel/params.hpp"

namespace flywheel {

/// How the commanded power of a slot relates to the previous slot's power.
/// The five cases partition the (p_in, p_prev) plane.
enum class TransitionCase {
    ZeroIn,           ///< p_in == 0
    ZeroPrev,         ///< p_prev == 0, p_in != 0
    SameSign,         ///< p_in * p_prev > 0
    OppositeNoSwitch, ///< opposite signs, filtered power keeps p_prev's sign all slot
    OppositeSwitch,   ///< opposite signs, filtered power crosses zero inside the slot
};

/// Short lowercase tag used in CSV/JSON output.
std::string to_string(TransitionCase c);

/// Efficiency bookkeeping for one slot boundary.
///
/// `eta_eff` is the magnitude-rule shortcut (eta_in when |p_in| > |p_prev|,
/// else eta_prev). It agrees with the case-derived efficiency used by the
/// energy formulas whenever delta >= t_cont * ln 2; the two are kept separate
/// so the disagreement regime can be studied. `t_change_s` is the zero
/// crossing of the filtered power and exists only for OppositeSwitch.
struct SlotTransition {
    TransitionCase case_tag = TransitionCase::ZeroIn;
    double eta_in = 1.0;
    double eta_prev = 1.0;
    double eta_eff = 1.0;
    std::optional<double> t_change_s;
};

/// Classifies one slot boundary and computes its efficiency constants.
/// Total: every finite (p_in, p_prev) pair maps to exactly one case;
/// p_in == p_prev == 0 resolves to ZeroIn.
SlotTransition classify_transition(double p_in_w, double p_prev_w, double delta_s,
                                   double t_cont_s, double e_c, double e_d);

/// Efficiency the single-efficiency energy formula uses for a non-switching
/// transition: eta_in for ZeroPrev and SameSign, eta_prev otherwise.
/// Throws std::logic_error for OppositeSwitch (no single efficiency exists).
double case_efficiency(const SlotTransition& transition);

/// Mechanical input power t_s seconds into a slot: the first-order filter
/// response to the step from p_prev to p_in, scaled by the charging or
/// discharging efficiency according to the sign of the filtered value.
double filtered_mech_power(double t_s, double p_in_w, double p_prev_w, double t_cont_s,
                           double e_c, double e_d);

/// Fraction of stored energy surviving one slot, exp(-delta / t_loss).
double self_discharge_factor(double delta_s, double t_loss_s);

/// Constants of the closed-form slot energy. p_coef and q_coef are singular
/// at t_cont == t_loss, which validate_params rejects.
struct ModelCoefficients {
    double gamma = 0.0;        ///< exp(-delta / t_loss), in (0, 1)
    double p_coef_s = 0.0;     ///< t_loss - t_loss * t_cont / (t_cont - t_loss)
    double q_coef_inv_s = 0.0; ///< (t_cont - t_loss) / (t_loss * t_cont)
};

/// Computes the closed-form coefficients. Throws ValidationError when the
/// time constants are non-positive or within the singularity guard band.
ModelCoefficients coefficients(double t_loss_s, double t_cont_s, double delta_s);

} // namespace flywheel
