"""Numerical toolkit for maximum extractable work and efficiency of nanoscale
heat engines under the full family of generalized free energies."""

from .errors import (
    CapacityError,
    ConstraintViolationError,
    DichotomyViolationError,
    DomainError,
    NanoheatError,
    NoConstraintError,
    NumericalInconsistencyError,
    ParameterError,
    RegimeError,
)
from .thermo import (
    Alpha,
    DiagonalState,
    EnergySpectrum,
    QubitBath,
    alpha_free_energy,
    binary_entropy,
    compose,
    renyi_divergence,
    state_moments,
    thermal_state,
)
from .second_laws import (
    BatterySpec,
    TransitionInstance,
    WorkCurve,
    WorkResult,
    max_extractable_work,
    no_perfect_work,
    transition_feasible,
    w_alpha,
)
from .macro import (
    EfficiencyBreakdown,
    derivative_identities,
    efficiency_breakdown,
    macro_carnot_limit,
    macro_work,
    quasi_static_instance,
    thermal_optimality_check,
)
from .nano import (
    EpsilonFamily,
    GammaProfile,
    QuasiStaticConfig,
    RegimeClassification,
    b_alpha,
    classify_regime,
    epsilon_family_eval,
    estimate_kappa_bar,
    estimate_nu,
    gamma,
    gamma_profile,
    infimum_location,
    near_perfect_ratio,
    omega,
    omega_single,
    quasistatic_engine,
    tanh_indicator,
)
from .multicycle import CycleLedger, CycleReport, convergence_schedule, plan_cycles, run_cycles
from .extensions import (
    CorrelatedFinalState,
    GeneralBattery,
    chi,
    correlated_bound_check,
    eps_hat,
    general_battery_pair,
    sample_correlated_state,
)

__version__ = "0.1.0"
