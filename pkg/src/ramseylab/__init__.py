"""Frequency estimation under spatially correlated Gaussian dephasing.

Builds dephasing decay factors for probes coupled to symmetric two-mode
Gaussian environments and propagates them through Fisher-information and
Cramér–Rao analysis to the precision-scaling hierarchy: standard quantum
limit, Zeno N^(-3/4), super-Zeno N^(-7/8), and Heisenberg N^(-1).
"""

from .decay import (
    CHAR_LOG_SCALE,
    CONTINUUM_CALIBRATION,
    DecayCurve,
    DecayModel,
    DiscreteModes,
    DynamicsKind,
    OhmicSpectrum,
    TabulatedSpectrum,
    beta_coefficient,
    gamma_discrete,
    gamma_general,
    gamma_local,
    gamma_no_free_evolution,
    gamma_ohmic_closed,
    gamma_quadrature,
    gamma_short_time,
    ohmic_kernel_integral,
    short_time_coefficients,
)
from .estimation import (
    EstimationResult,
    ProbeEnsemble,
    ProbeState,
    Strategy,
    fisher_information,
    min_uncertainty,
    optimal_phase,
    optimal_time,
    probe_state,
    transition_probability,
    uncertainty_squared,
)
from .exceptions import (
    BudgetError,
    ConfigError,
    DomainError,
    NumericalError,
    RamseyLabError,
    SingularPointError,
    SolverError,
)
from .gaussian_env import (
    EnvCorrelation,
    PhysicalityVerdict,
    characteristic_function,
    correlation_coefficient,
    env_from_covariance,
    log_characteristic_function,
    make_tmsv,
    to_covariance,
    validate_physicality,
)
from .scaling import (
    Regime,
    RegimeLabel,
    ScalingFit,
    ScalingTable,
    classify_regime,
    dfs_check,
    fit_scaling_exponent,
    logspace_int,
    sweep_uncertainty,
)

__version__ = "0.1.0"
