#include "flywheel/params.hpp"

#include <cmath>
#include <string>

namespace flywheel {

namespace {

bool finite(double v) { return std::isfinite(v); }

} // namespace

const FlywheelParams& validate_params(const FlywheelParams& params) {
    if (!finite(params.t_loss_s) || params.t_loss_s <= 0.0) {
        throw ValidationError("time constant t_loss_s must be positive and finite");
    }
    if (!finite(params.t_cont_s) || params.t_cont_s <= 0.0) {
        throw ValidationError("time constant t_cont_s must be positive and finite");
    }
    if (!finite(params.delta_s) || params.delta_s <= 0.0) {
        throw ValidationError("slot duration delta_s must be positive and finite");
    }
    if (!finite(params.e_c) || params.e_c <= 0.0 || params.e_c > 1.0) {
        throw ValidationError("efficiency out of range: e_c must lie in (0, 1]");
    }
    if (!finite(params.e_d) || params.e_d <= 0.0 || params.e_d > 1.0) {
        throw ValidationError("efficiency out of range: e_d must lie in (0, 1]");
    }
    if (!finite(params.e_cap_j) || params.e_cap_j <= 0.0) {
        throw ValidationError("capacity e_cap_j must be positive and finite");
    }
    if (!finite(params.e_init_j) || params.e_init_j < 0.0) {
        throw ValidationError("initial energy e_init_j must be non-negative and finite");
    }
    if (params.e_init_j > params.e_cap_j) {
        throw ValidationError("initial energy e_init_j exceeds capacity e_cap_j");
    }
    if (!finite(params.p_rated_w) || params.p_rated_w <= 0.0) {
        throw ValidationError("rated power p_rated_w must be positive and finite");
    }
    if (!finite(params.p_prev_init_w)) {
        throw ValidationError("p_prev_init_w must be finite");
    }
    if (std::abs(params.t_cont_s - params.t_loss_s) / params.t_loss_s <= 1e-9) {
        throw ValidationError("coefficient singularity: t_cont_s must differ from t_loss_s");
    }
    return params;
}

const PowerProfile& validate_profile(const PowerProfile& profile, const FlywheelParams& params) {
    if (profile.powers_w.empty()) {
        throw ValidationError("profile must contain at least one slot");
    }
    if (profile.delta_s != params.delta_s) {
        throw ValidationError("profile slot duration " + std::to_string(profile.delta_s) +
                              " does not match params delta_s " + std::to_string(params.delta_s));
    }
    for (std::size_t i = 0; i < profile.powers_w.size(); ++i) {
        const double p = profile.powers_w[i];
        if (!finite(p)) {
            throw ValidationError("slot " + std::to_string(i + 1) + ": power is not finite");
        }
        if (std::abs(p) > params.p_rated_w) {
            throw ValidationError("slot " + std::to_string(i + 1) + ": |power| " +
                                  std::to_string(std::abs(p)) + " W exceeds rated power " +
                                  std::to_string(params.p_rated_w) + " W");
        }
    }
    return profile;
}

double loss_time_constant(double inertia_kg_m2, double loss_factor) {
    if (!finite(inertia_kg_m2) || inertia_kg_m2 <= 0.0) {
        throw ValidationError("inertia must be positive");
    }
    if (!finite(loss_factor) || loss_factor <= 0.0) {
        throw ValidationError("loss factor must be positive");
    }
    return inertia_kg_m2 / (2.0 * loss_factor);
}

double energy_of_speed(double inertia_kg_m2, double omega_rad_s) {
    if (!finite(inertia_kg_m2) || inertia_kg_m2 <= 0.0) {
        throw ValidationError("inertia must be positive");
    }
    if (!finite(omega_rad_s) || omega_rad_s < 0.0) {
        throw ValidationError("speed must be non-negative");
    }
    return 0.5 * inertia_kg_m2 * omega_rad_s * omega_rad_s;
}

double speed_of_energy(double inertia_kg_m2, double energy_j) {
    if (!finite(inertia_kg_m2) || inertia_kg_m2 <= 0.0) {
        throw ValidationError("inertia must be positive");
    }
    if (!finite(energy_j) || energy_j < 0.0) {
        throw ValidationError("energy must be non-negative");
    }
    return std::sqrt(2.0 * energy_j / inertia_kg_m2);
}

} // namespace flywheel
