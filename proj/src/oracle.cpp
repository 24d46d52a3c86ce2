#include "flywheel/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace flywheel {

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule (positive
// abscissae; the rule is symmetric).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct QuadInterval {
    double a, b;
    double result;
    double abserr;
    double resabs;
};

// One Kronrod-15 evaluation over [a, b]; the error estimate follows the
// usual resasc-scaled sharpening so smooth integrands converge in few splits.
template <typename F>
QuadInterval kronrod15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv1[7];
    double fv2[7];
    const double fc = f(center);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double resabs = std::abs(resk);

    for (int j = 0; j < 3; ++j) {
        const int jg = 2 * j + 1;
        const double absc = half * kXgk[jg];
        const double f1 = f(center - absc);
        const double f2 = f(center + absc);
        fv1[jg] = f1;
        fv2[jg] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jg] * (f1 + f2);
        resabs += kWgk[jg] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jk = 2 * j;
        const double absc = half * kXgk[jk];
        const double f1 = f(center - absc);
        const double f2 = f(center + absc);
        fv1[jk] = f1;
        fv2[jk] = f2;
        resk += kWgk[jk] * (f1 + f2);
        resabs += kWgk[jk] * (std::abs(f1) + std::abs(f2));
    }

    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }

    double abserr = std::abs((resk - resg) * half);
    resasc *= std::abs(half);
    resabs *= std::abs(half);
    if (resasc != 0.0 && abserr != 0.0) {
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        abserr = std::max(50.0 * eps * resabs, abserr);
    }
    return {a, b, resk * half, abserr, resabs};
}

// Globally adaptive refinement: repeatedly bisect the interval with the
// largest error estimate until the summed error meets the relative target
// or the roundoff floor.
template <typename F>
double adaptive_quadrature(const F& f, const std::vector<double>& breakpoints, double rel_tol) {
    constexpr int kMaxIntervals = 2000;
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<QuadInterval> intervals;
    intervals.reserve(64);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) {
            intervals.push_back(kronrod15(f, breakpoints[i], breakpoints[i + 1]));
        }
    }
    if (intervals.empty()) {
        return 0.0;
    }

    while (true) {
        double total = 0.0;
        double err = 0.0;
        double resabs = 0.0;
        for (const QuadInterval& iv : intervals) {
            total += iv.result;
            err += iv.abserr;
            resabs += iv.resabs;
        }
        if (err <= std::max(rel_tol * std::abs(total), 100.0 * eps * resabs)) {
            return total;
        }
        if (intervals.size() >= kMaxIntervals) {
            throw NumericError("adaptive quadrature did not reach the requested tolerance");
        }
        auto worst = std::max_element(
            intervals.begin(), intervals.end(),
            [](const QuadInterval& l, const QuadInterval& r) { return l.abserr < r.abserr; });
        const double a = worst->a;
        const double b = worst->b;
        const double mid = 0.5 * (a + b);
        *worst = kronrod15(f, a, mid);
        intervals.push_back(kronrod15(f, mid, b));
    }
}

double eta_of(double power, const FlywheelParams& params) {
    return power >= 0.0 ? params.e_c : params.e_d;
}

} // namespace

double quadrature_slot_energy(double p_in_w, double p_prev_w, const FlywheelParams& params,
                              bool weighted, const OracleConfig& config) {
    validate_params(params);
    const double dp = p_in_w - p_prev_w;
    const auto integrand = [&](double t) {
        const double response = p_in_w - dp * std::exp(-t / params.t_cont_s);
        double value = eta_of(response, params) * response;
        if (weighted) {
            value *= std::exp(-(params.delta_s - t) / params.t_loss_s);
        }
        return value;
    };

    // The filter transient at the slot start can be orders of magnitude
    // narrower than the slot; without breakpoints resolving it, the initial
    // rule evaluations never see it and the refinement has nothing to act
    // on. Log-spaced seeds down to t_cont keep the layer visible, and the
    // eta kink at t_change gets its own breakpoint.
    std::vector<double> breakpoints{0.0};
    for (double t = params.t_cont_s; t < params.delta_s; t *= 5.0) {
        breakpoints.push_back(t);
    }
    if (config.split_at_t_change) {
        const SlotTransition tr = classify_transition(p_in_w, p_prev_w, params.delta_s,
                                                      params.t_cont_s, params.e_c, params.e_d);
        if (tr.t_change_s) {
            breakpoints.push_back(*tr.t_change_s);
        }
    }
    breakpoints.push_back(params.delta_s);
    std::sort(breakpoints.begin(), breakpoints.end());
    return adaptive_quadrature(integrand, breakpoints, config.quad_tol);
}

namespace {

// RK4 for dE/dt = forcing(t) - E / t_loss over [t_a, t_b] in `steps` steps.
template <typename Forcing>
double rk4_energy(const Forcing& forcing, double energy, double t_a, double t_b, int steps,
                  double t_loss_s) {
    const double h = (t_b - t_a) / steps;
    for (int i = 0; i < steps; ++i) {
        const double t = t_a + i * h;
        const double g1 = forcing(t);
        const double gm = forcing(t + 0.5 * h);
        const double g2 = forcing(t + h);
        const double k1 = g1 - energy / t_loss_s;
        const double k2 = gm - (energy + 0.5 * h * k1) / t_loss_s;
        const double k3 = gm - (energy + 0.5 * h * k2) / t_loss_s;
        const double k4 = g2 - (energy + h * k3) / t_loss_s;
        energy += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return energy;
}

void check_substeps(const OracleConfig& config) {
    if (config.substeps_per_slot < 1) {
        throw ValidationError("substeps_per_slot must be at least 1");
    }
}

std::pair<int, int> split_steps(int total, double t_split, double delta) {
    const int n1 = std::clamp(static_cast<int>(std::lround(total * t_split / delta)), 1,
                              std::max(1, total - 1));
    return {n1, std::max(1, total - n1)};
}

} // namespace

EnergyTrace integrate_ode(const PowerProfile& profile, const FlywheelParams& params,
                          const OracleConfig& config) {
    validate_params(params);
    validate_profile(profile, params);
    check_substeps(config);

    const std::size_t slots = profile.powers_w.size();
    EnergyTrace trace;
    trace.entries.reserve(slots + 1);
    trace.transitions.reserve(slots);
    trace.saturated.reserve(slots);

    double energy = params.e_init_j;
    trace.entries.push_back({0, 0.0, energy});

    for (std::size_t k = 1; k <= slots; ++k) {
        const double p_in = profile.powers_w[k - 1];
        const double p_prev = (k == 1) ? params.p_prev_init_w : profile.powers_w[k - 2];
        const SlotTransition tr = classify_transition(p_in, p_prev, params.delta_s,
                                                      params.t_cont_s, params.e_c, params.e_d);
        trace.transitions.push_back(tr);

        const double dp = p_in - p_prev;
        const auto forcing = [&](double t) {
            const double response = p_in - dp * std::exp(-t / params.t_cont_s);
            return eta_of(response, params) * response;
        };
        if (config.split_at_t_change && tr.t_change_s) {
            const auto [n1, n2] =
                split_steps(config.substeps_per_slot, *tr.t_change_s, params.delta_s);
            energy = rk4_energy(forcing, energy, 0.0, *tr.t_change_s, n1, params.t_loss_s);
            energy = rk4_energy(forcing, energy, *tr.t_change_s, params.delta_s, n2,
                                params.t_loss_s);
        } else {
            energy = rk4_energy(forcing, energy, 0.0, params.delta_s, config.substeps_per_slot,
                                params.t_loss_s);
        }
        trace.saturated.push_back(energy < 0.0 || energy > params.e_cap_j);
        trace.entries.push_back({static_cast<int>(k), static_cast<double>(k) * params.delta_s,
                                 energy});
    }
    return trace;
}

namespace {

struct FilterState {
    double y;
    double energy;
};

// Joint RK4 step for (y, E): y tracks the controller output, E the stored
// energy. eta switches on the sign of y.
FilterState rk4_joint(FilterState s, double p_in, double t_a, double t_b, int steps,
                      const FlywheelParams& params) {
    const double h = (t_b - t_a) / steps;
    const auto eta = [&](double y) { return y >= 0.0 ? params.e_c : params.e_d; };
    for (int i = 0; i < steps; ++i) {
        const double k1y = (p_in - s.y) / params.t_cont_s;
        const double k1e = eta(s.y) * s.y - s.energy / params.t_loss_s;
        const double y2 = s.y + 0.5 * h * k1y;
        const double e2 = s.energy + 0.5 * h * k1e;
        const double k2y = (p_in - y2) / params.t_cont_s;
        const double k2e = eta(y2) * y2 - e2 / params.t_loss_s;
        const double y3 = s.y + 0.5 * h * k2y;
        const double e3 = s.energy + 0.5 * h * k2e;
        const double k3y = (p_in - y3) / params.t_cont_s;
        const double k3e = eta(y3) * y3 - e3 / params.t_loss_s;
        const double y4 = s.y + h * k3y;
        const double e4 = s.energy + h * k3e;
        const double k4y = (p_in - y4) / params.t_cont_s;
        const double k4e = eta(y4) * y4 - e4 / params.t_loss_s;
        s.y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        s.energy += h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
    }
    return s;
}

} // namespace

EnergyTrace integrate_physical(const PowerProfile& profile, const FlywheelParams& params,
                               const OracleConfig& config) {
    validate_params(params);
    validate_profile(profile, params);
    check_substeps(config);

    const std::size_t slots = profile.powers_w.size();
    EnergyTrace trace;
    trace.entries.reserve(slots + 1);
    trace.transitions.reserve(slots);
    trace.saturated.reserve(slots);

    FilterState state{params.p_prev_init_w, params.e_init_j};
    trace.entries.push_back({0, 0.0, state.energy});

    for (std::size_t k = 1; k <= slots; ++k) {
        const double p_in = profile.powers_w[k - 1];
        const double p_prev = (k == 1) ? params.p_prev_init_w : profile.powers_w[k - 2];
        trace.transitions.push_back(classify_transition(p_in, p_prev, params.delta_s,
                                                        params.t_cont_s, params.e_c, params.e_d));

        // The carried filter state crosses zero inside the slot iff it and
        // p_in have strictly opposite signs; the crossing time of the true
        // filter trajectory marks the eta kink.
        double t_split = -1.0;
        if (config.split_at_t_change && state.y * p_in < 0.0) {
            const double t_x = -params.t_cont_s * std::log(p_in / (p_in - state.y));
            if (t_x > 0.0 && t_x < params.delta_s) {
                t_split = t_x;
            }
        }
        if (t_split > 0.0) {
            const auto [n1, n2] = split_steps(config.substeps_per_slot, t_split, params.delta_s);
            state = rk4_joint(state, p_in, 0.0, t_split, n1, params);
            state = rk4_joint(state, p_in, t_split, params.delta_s, n2, params);
        } else {
            state = rk4_joint(state, p_in, 0.0, params.delta_s, config.substeps_per_slot, params);
        }

        trace.saturated.push_back(state.energy < 0.0 || state.energy > params.e_cap_j);
        trace.entries.push_back({static_cast<int>(k), static_cast<double>(k) * params.delta_s,
                                 state.energy});
    }
    return trace;
}

EnergyTrace simulate_baseline(const PowerProfile& profile, const FlywheelParams& params) {
    validate_params(params);
    validate_profile(profile, params);

    const std::size_t slots = profile.powers_w.size();
    EnergyTrace trace;
    trace.entries.reserve(slots + 1);
    trace.transitions.reserve(slots);
    trace.saturated.reserve(slots);

    double energy = params.e_init_j;
    trace.entries.push_back({0, 0.0, energy});
    for (std::size_t k = 1; k <= slots; ++k) {
        const double p_in = profile.powers_w[k - 1];
        const double p_prev = (k == 1) ? params.p_prev_init_w : profile.powers_w[k - 2];
        trace.transitions.push_back(classify_transition(p_in, p_prev, params.delta_s,
                                                        params.t_cont_s, params.e_c, params.e_d));
        energy += eta_of(p_in, params) * p_in * params.delta_s;
        trace.saturated.push_back(energy < 0.0 || energy > params.e_cap_j);
        trace.entries.push_back({static_cast<int>(k), static_cast<double>(k) * params.delta_s,
                                 energy});
    }
    return trace;
}

} // namespace flywheel
