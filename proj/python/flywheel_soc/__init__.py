"""Flywheel state-of-charge evolution engine.

Exact closed-form slot recursion, fast approximation with an a-priori error
bound, and brute-force reference integrators for slotted power profiles.
"""

from ._core import (  # noqa: F401
    ApproxMode,
    BoundEntry,
    BoundReport,
    EnergyTrace,
    FlywheelParams,
    IoError,
    ModelCoefficients,
    NumericError,
    OracleConfig,
    PowerProfile,
    SimMode,
    SlotEnergy,
    SlotFormula,
    SlotTransition,
    TraceEntry,
    TransitionCase,
    ValidationError,
    __version__,
    case_efficiency,
    check_bound,
    classify_transition,
    coefficients,
    energy_of_speed,
    error_bound,
    filtered_mech_power,
    integrate_ode,
    integrate_physical,
    load_params,
    load_profile,
    loss_time_constant,
    quadrature_slot_energy,
    self_discharge_factor,
    simulate_approx,
    simulate_baseline,
    simulate_exact,
    slot_energy_approx,
    slot_energy_exact,
    speed_of_energy,
    step_exact,
    validate_params,
    validate_profile,
)
