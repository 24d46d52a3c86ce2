#pragma once

#include "flywheel/trace.hpp"

namespace flywheel {

/// The approximate slot energy drops the intra-slot loss weighting.
/// Truncated additionally drops the exp(-delta / t_cont) filter-tail terms,
/// which is the headline form for delta >> t_cont; Full keeps them.
enum class ApproxMode {
    Full,
    Truncated,
};

/// Approximate slot energy: integral of the filtered mechanical power over
/// one slot, without loss weighting.
double slot_energy_approx(double p_in_w, double p_prev_w, const FlywheelParams& params,
                          ApproxMode mode);

/// Slot recursion with the approximate slot energy in place of the exact one.
EnergyTrace simulate_approx(const PowerProfile& profile, const FlywheelParams& params,
                            ApproxMode mode, SimMode sim_mode = SimMode::Unconstrained);

/// A-priori cap on |exact - approx| stored energy at slot k:
///   (1 - exp(-(k+1) delta / t_loss)) * r_max * delta
/// with r_max = e_d * max |commanded power| over [0, t_k]. Nondecreasing in
/// both k and the power cap; the profile must cover slot k (or the horizon
/// end, whichever is earlier).
double error_bound(std::size_t k, double delta_s, double t_loss_s, const PowerProfile& profile,
                   double e_d);

/// One row of a bound check: realized gap vs. the a-priori bound at slot k.
struct BoundEntry {
    int slot = 0;
    double gap_j = 0.0;
    double bound_j = 0.0;
    bool satisfied = true;
};

/// Result of checking the approximation gap bound along a whole profile.
/// `r_max_w` is e_d times the largest commanded power magnitude over the
/// horizon; `asymptotic_bound_j` = r_max_w * delta caps the gap for every k.
struct BoundReport {
    std::vector<BoundEntry> entries;
    double r_max_w = 0.0;
    double asymptotic_bound_j = 0.0;

    bool all_satisfied() const;
};

/// Simulates both engines unconstrained and compares the per-slot gap
/// against the bound. Comparison carries 1e-9 J of absolute slack so that
/// floating-point rounding cannot fail a mathematically tight bound.
BoundReport check_bound(const PowerProfile& profile, const FlywheelParams& params,
                        ApproxMode mode);

} // namespace flywheel
