"""From decay factors to frequency-estimation precision.

A Ramsey cycle of duration t repeated T/t times estimates the frequency
difference nu through the accumulated relative phase eps = nu - (fixed laser
offsets), so d(eps)/d(nu) = 1.  The coincidence probability of initial and
final probe states is modeled as

    p = (1 + exp(M gamma) cos(M eps t)) / 2,

with M = 1 for a product ensemble (each probe measured independently) and
M = N for a maximally entangled ensemble that accumulates the phase N-fold.
This is the minimal model whose Fisher-information chain reproduces the
closed-form minimized uncertainties

    product:    (d nu)^2 = 1 / (N T t exp(2 gamma(t))),
    entangled:  (d nu)^2 = 1 / (N^2 T t exp(2 N gamma(t))),

at the optimal phase; the test suite validates that algebraic identity
rather than asserting it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .decay import DecayModel
from .exceptions import (
    BudgetError,
    DomainError,
    SingularPointError,
    SolverError,
)

_ROOT_REL_TOL = 1e-12
_ROOT_BRACKET_START = 1e-12


class Strategy(enum.Enum):
    PRODUCT = "product"
    ENTANGLED = "entangled"


@dataclass(frozen=True)
class ProbeEnsemble:
    """N probes, a total time budget T, and a preparation strategy.

    ``k`` selects the phase branch (odd positive integer) used when tuning
    the relative phase to an odd multiple of pi/2.
    """

    n: int
    total_time: float
    strategy: Strategy = Strategy.ENTANGLED
    k: int = 1

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DomainError(f"probe count must be an integer >= 1, got {self.n!r}")
        if not (math.isfinite(self.total_time) and self.total_time > 0):
            raise DomainError(f"total time budget must be > 0, got {self.total_time!r}")
        if not isinstance(self.k, (int, np.integer)) or self.k < 1 or self.k % 2 == 0:
            raise DomainError(f"phase branch k must be an odd positive integer, got {self.k!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))

    @property
    def phase_multiplier(self) -> int:
        """M in the coincidence model: 1 for product, N for entangled probes."""
        return self.n if self.strategy is Strategy.ENTANGLED else 1


@dataclass(frozen=True)
class ProbeState:
    """Reduced probe state after one Ramsey interval: diagonals and coherence."""

    populations: tuple[float, float]
    coherence: complex


@dataclass(frozen=True)
class EstimationResult:
    t_opt: float
    delta_nu: float
    fisher: float
    gamma_at_opt: float
    regime_note: str = ""


def _check_gamma(gamma_value: float) -> float:
    # gamma = -inf is accepted as the fully dephased limit.
    gamma_value = float(gamma_value)
    if math.isnan(gamma_value) or gamma_value > 0:
        raise DomainError(f"gamma must be a real number <= 0, got {gamma_value!r}")
    return gamma_value


def probe_state(eps_bar: float, t: float, gamma_value: float) -> ProbeState:
    """Evolved single-probe state: populations 1/2, coherence e^(i eps t + gamma)/2."""
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    gamma_value = _check_gamma(gamma_value)
    coherence = 0.5 * math.exp(gamma_value) * complex(math.cos(eps_bar * t),
                                                      math.sin(eps_bar * t))
    return ProbeState(populations=(0.5, 0.5), coherence=coherence)


def transition_probability(eps_bar: float, t: float, gamma_value: float,
                           ensemble: ProbeEnsemble) -> float:
    """Coincidence probability p = (1 + e^(M gamma) cos(M eps t)) / 2."""
    gamma_value = _check_gamma(gamma_value)
    m = ensemble.phase_multiplier
    return 0.5 * (1.0 + math.exp(m * gamma_value) * math.cos(m * eps_bar * t))


def fisher_information(eps_bar: float, t: float, gamma_value: float,
                       ensemble: ProbeEnsemble) -> float:
    """Fisher information of one query: |dp/dnu|^2 / (p(1-p)).

    Product strategy: the single-probe value t^2 e^(2 gamma) sin^2(eps t) /
    (1 - e^(2 gamma) cos^2(eps t)).  Entangled strategy: the same with
    (t, eps t, gamma) scaled by N and an extra N^2 from the N-fold phase.
    """
    gamma_value = _check_gamma(gamma_value)
    m = ensemble.phase_multiplier
    phase = m * eps_bar * t
    e2g = math.exp(2.0 * m * gamma_value)
    denominator = 1.0 - e2g * math.cos(phase) ** 2
    if denominator == 0.0:
        raise SingularPointError(
            f"p(1-p) = 0 at eps*t = {eps_bar * t}, gamma = {gamma_value}"
        )
    return m * m * t * t * e2g * math.sin(phase) ** 2 / denominator


def uncertainty_squared(eps_bar: float, t: float, gamma_value: float,
                        ensemble: ProbeEnsemble) -> float:
    """Estimation variance 1 / ((T/t) F_total) for T/t repeated queries.

    F_total is N times the single-probe Fisher information for product
    probes, or the entangled-ensemble Fisher information directly.
    """
    if t <= 0:
        raise DomainError(f"interrogation time must be > 0, got {t!r}")
    if t > ensemble.total_time:
        raise BudgetError(
            f"interrogation time {t} exceeds the total budget {ensemble.total_time}"
        )
    fisher = fisher_information(eps_bar, t, gamma_value, ensemble)
    if ensemble.strategy is Strategy.PRODUCT:
        fisher *= ensemble.n
    if fisher == 0.0:
        raise SingularPointError("zero Fisher information; uncertainty diverges")
    return t / (ensemble.total_time * fisher)


def optimal_phase(t_opt: float, ensemble: ProbeEnsemble) -> float:
    """Relative phase rate that tunes the accumulated phase to k pi / 2.

    Product probes: eps = k pi / (2 t).  Entangled probes: eps = k pi /
    (2 N t), so the total N eps t is the same odd multiple of pi/2.
    """
    if t_opt <= 0:
        raise DomainError(f"t_opt must be > 0, got {t_opt!r}")
    if ensemble.k % 2 == 0:
        raise DomainError("phase branch k must be odd")
    return ensemble.k * math.pi / (2.0 * ensemble.phase_multiplier * t_opt)


def optimal_time(decay: DecayModel, ensemble: ProbeEnsemble,
                 t_cap: float | None = None) -> float:
    """Interrogation time solving 1 + 2 M t gamma'(t) = 0 (M = 1 or N).

    Found by doubling bracket expansion from [1e-12, 1] followed by
    bisection to relative width 1e-12, then verified to satisfy the
    stationarity condition to 1e-9.  If the model is decoherence-free
    (gamma identically zero) there is no root and the budget cap ``t_cap``
    (default: the total time T) is returned instead.
    """
    if t_cap is None:
        t_cap = ensemble.total_time
    if t_cap <= 0:
        raise DomainError(f"t_cap must be > 0, got {t_cap!r}")
    if decay.is_decoherence_free:
        return t_cap
    m = ensemble.phase_multiplier

    def condition(t: float) -> float:
        return 1.0 + 2.0 * m * t * decay.gamma_derivative(t)

    lo = _ROOT_BRACKET_START
    f_lo = condition(lo)
    if f_lo <= 0.0:
        raise SolverError(f"stationarity condition already negative at t = {lo}: {f_lo}")
    hi = min(1.0, t_cap)
    f_hi = condition(hi)
    while f_hi > 0.0 and hi < t_cap:
        hi = min(2.0 * hi, t_cap)
        f_hi = condition(hi)
    if f_hi > 0.0:
        raise SolverError(
            "no sign change of 1 + 2 M t gamma'(t) in "
            f"[{_ROOT_BRACKET_START}, {t_cap}]: f({lo}) = {f_lo}, f({hi}) = {f_hi}; "
            "the decay may be too weak to optimize within the budget"
        )
    while (hi - lo) > _ROOT_REL_TOL * hi:
        mid = 0.5 * (lo + hi)
        if condition(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    residual = condition(root)
    if abs(residual) > 1e-9:
        raise SolverError(f"root residual {residual} exceeds 1e-9 at t = {root}")
    return root


def min_uncertainty(decay: DecayModel, ensemble: ProbeEnsemble,
                    t_cap: float | None = None) -> EstimationResult:
    """Minimized uncertainty at the optimal interrogation time and phase.

    Product: (d nu)^2 = 1 / (N T t e^(2 gamma)).  Entangled: (d nu)^2 =
    1 / (N^2 T t e^(2 N gamma)).  Decoherence-free models use the full
    budget cap as interrogation time and are flagged in ``regime_note``.
    """
    t_opt = optimal_time(decay, ensemble, t_cap=t_cap)
    gamma_at_opt = float(decay.gamma(t_opt))
    n = ensemble.n
    big_t = ensemble.total_time
    m = ensemble.phase_multiplier
    attenuation = math.exp(2.0 * m * gamma_at_opt)
    # At the optimal phase the cosine term vanishes, so the per-query Fisher
    # information is M^2 t^2 e^(2 M gamma); product ensembles add N of them.
    fisher = m * m * t_opt * t_opt * attenuation
    if ensemble.strategy is Strategy.PRODUCT:
        fisher *= n
    variance = t_opt / (big_t * fisher)
    note = "decoherence-free" if decay.is_decoherence_free else ""
    return EstimationResult(
        t_opt=t_opt,
        delta_nu=math.sqrt(variance),
        fisher=fisher,
        gamma_at_opt=gamma_at_opt,
        regime_note=note,
    )
