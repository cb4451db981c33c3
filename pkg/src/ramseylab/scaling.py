"""Probe-number sweeps, power-law fits, and regime classification.

Sweeping the minimized uncertainty over N and fitting log(delta_nu) against
log(N) recovers the precision-scaling hierarchy: the standard quantum limit
N^(-1/2) for product probes, the Zeno scaling N^(-3/4) for entangled probes
under quadratic short-time decay, N^(-7/8) under quartic decay from strongly
correlated environments, and the Heisenberg limit N^(-1) on the
decoherence-free configurations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .decay import DecayModel
from .estimation import ProbeEnsemble, Strategy, min_uncertainty
from .exceptions import DomainError, SolverError


class Regime(enum.Enum):
    SQL = -0.5
    ZENO = -0.75
    SUPER_ZENO = -0.875
    HEISENBERG = -1.0
    UNCLASSIFIED = None

    @property
    def nominal_slope(self):
        return self.value


@dataclass(frozen=True)
class RegimeLabel:
    regime: Regime
    fitted_slope: float
    band: float


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    residual_rms: float


@dataclass(frozen=True)
class ScalingTable:
    """Per-N sweep results: optimal time, uncertainty, decay at the optimum."""

    n_values: np.ndarray
    t_opt: np.ndarray
    delta_nu: np.ndarray
    gamma_at_opt: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n_values, dtype=int)
        cols = {
            "t_opt": np.asarray(self.t_opt, dtype=float),
            "delta_nu": np.asarray(self.delta_nu, dtype=float),
            "gamma_at_opt": np.asarray(self.gamma_at_opt, dtype=float),
        }
        if any(len(col) != len(n) for col in cols.values()):
            raise DomainError("table columns must have equal length")
        if np.any(np.diff(n) <= 0):
            raise DomainError("N values must be strictly increasing")
        if np.any(cols["t_opt"] <= 0) or np.any(cols["delta_nu"] <= 0):
            raise DomainError("t_opt and delta_nu must be positive")
        if np.any(np.diff(cols["delta_nu"]) >= 0):
            raise DomainError("delta_nu must be strictly decreasing in N")
        object.__setattr__(self, "n_values", n)
        for name, col in cols.items():
            object.__setattr__(self, name, col)

    def __len__(self) -> int:
        return len(self.n_values)


def logspace_int(n_min: int, n_max: int, per_decade: int = 25) -> list[int]:
    """Strictly increasing integers, log-spaced at ``per_decade`` points per decade."""
    if n_min < 1 or n_max <= n_min:
        raise DomainError(f"need 1 <= n_min < n_max, got [{n_min}, {n_max}]")
    if per_decade < 1:
        raise DomainError(f"per_decade must be >= 1, got {per_decade!r}")
    decades = np.log10(n_max / n_min)
    count = max(2, int(round(decades * per_decade)) + 1)
    grid = np.unique(np.rint(np.logspace(np.log10(n_min), np.log10(n_max), count)).astype(int))
    return [int(n) for n in grid]


def sweep_uncertainty(decay: DecayModel, strategy: Strategy,
                      n_values: Sequence[int], total_time: float,
                      t_cap: float | None = None, k: int = 1) -> ScalingTable:
    """Run :func:`ramseylab.estimation.min_uncertainty` over an ascending N grid."""
    n_values = [int(n) for n in n_values]
    if len(n_values) < 2:
        raise DomainError("sweep needs at least 2 probe counts")
    if any(n2 <= n1 for n1, n2 in zip(n_values, n_values[1:])):
        raise DomainError("N values must be sorted strictly ascending")
    rows = []
    for n in n_values:
        ensemble = ProbeEnsemble(n=n, total_time=total_time, strategy=strategy, k=k)
        try:
            rows.append(min_uncertainty(decay, ensemble, t_cap=t_cap))
        except SolverError as exc:
            raise SolverError(f"sweep failed at N = {n}: {exc}") from exc
    return ScalingTable(
        n_values=np.array(n_values),
        t_opt=np.array([r.t_opt for r in rows]),
        delta_nu=np.array([r.delta_nu for r in rows]),
        gamma_at_opt=np.array([r.gamma_at_opt for r in rows]),
    )


def fit_scaling_exponent(table: ScalingTable) -> ScalingFit:
    """Ordinary least squares of log(delta_nu) on log(N)."""
    if len(table) < 2:
        raise DomainError("fit needs at least 2 rows")
    log_n = np.log(table.n_values.astype(float))
    log_d = np.log(table.delta_nu)
    slope, intercept = np.polyfit(log_n, log_d, 1)
    residuals = log_d - (slope * log_n + intercept)
    return ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
    )


def classify_regime(slope: float, band: float = 0.03) -> RegimeLabel:
    """Nearest nominal exponent within ``band``, else UNCLASSIFIED."""
    if not np.isfinite(slope):
        raise DomainError(f"slope must be finite, got {slope!r}")
    candidates = [r for r in Regime if r is not Regime.UNCLASSIFIED]
    nearest = min(candidates, key=lambda r: abs(slope - r.nominal_slope))
    if abs(slope - nearest.nominal_slope) <= band:
        return RegimeLabel(regime=nearest, fitted_slope=slope, band=band)
    return RegimeLabel(regime=Regime.UNCLASSIFIED, fitted_slope=slope, band=band)


def dfs_check(decay: DecayModel, t_grid, tol: float) -> bool:
    """True iff max |gamma(t)| over the grid is within ``tol``."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise DomainError("dfs_check needs a non-empty time grid")
    if tol <= 0:
        raise DomainError(f"tolerance must be > 0, got {tol!r}")
    gamma = np.asarray(decay.gamma(t_grid), dtype=float)
    return bool(np.max(np.abs(gamma)) <= tol)
