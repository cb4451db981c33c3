"""Symmetric two-mode Gaussian environment states.

Conventions used throughout the package:

* natural units with hbar = 2, so the vacuum quadrature variance is 1;
* quadrature ordering R = (q1, p1, q2, p2);
* a symmetric environment is parameterized by the variance a = <q^2>
  (equal for both modes), the position cross-correlation c_plus = <q1 q2>
  (taken >= 0), and the ratio theta = <p1 p2>/<q1 q2> in [-1, 1];
* the displacement operator is D(alpha) = exp(i(Im(alpha) q + Re(alpha) p)),
  so a displacement alpha maps to the phase-space vector (Im alpha, Re alpha)
  per mode.  This is the unique convention that reproduces the single-mode
  vacuum overlap |<0|D(alpha)|0>| = exp(-|alpha|^2 / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

# Absolute slack tolerance for the physicality inequality; every quantity
# handled here is an O(1)-O(100) double.
INEQUALITY_SLACK_TOL = 1e-9


@dataclass(frozen=True)
class EnvCorrelation:
    """Standard-form parameters (a, c_plus, theta) of a symmetric two-mode state.

    Construction only rejects malformed fields (non-finite values, negative
    c_plus).  Whether the parameters describe a physical quantum state is a
    separate question answered by :func:`validate_physicality`, so that
    unphysical parameter sets can still be constructed and diagnosed.
    """

    a: float
    c_plus: float
    theta: float

    def __post_init__(self):
        for name in ("a", "c_plus", "theta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        # Correlations are taken non-negative by convention; a negative input
        # is rejected rather than silently reflected to |c_plus|.
        if self.c_plus < 0:
            raise DomainError(f"c_plus must be >= 0, got {self.c_plus!r}")


@dataclass(frozen=True)
class PhysicalityVerdict:
    """Outcome of a physicality check, with the violated inequality if any."""

    is_physical: bool
    violation: str = ""

    def __bool__(self) -> bool:
        return self.is_physical


def make_tmsv(r: float) -> EnvCorrelation:
    """Two-mode squeezed vacuum with squeezing parameter r >= 0.

    Returns the standard-form parameters a = cosh(2r), c_plus = sinh(2r)
    and theta = -1 (positions correlated, momenta anti-correlated).  The
    state is pure, so it saturates the physicality inequality.
    """
    if not (isinstance(r, (int, float)) and math.isfinite(r)):
        raise DomainError(f"squeezing parameter must be finite, got {r!r}")
    if r < 0:
        raise DomainError(f"squeezing parameter must be >= 0, got {r!r}")
    return EnvCorrelation(a=math.cosh(2 * r), c_plus=math.sinh(2 * r), theta=-1.0)


def validate_physicality(env: EnvCorrelation) -> PhysicalityVerdict:
    """Check the standard-form invariants of a symmetric two-mode state.

    Accepts iff a >= 1, 0 <= c_plus <= a, |theta| <= 1 and the determinant
    inequality det(sigma) + 1 >= a^2 + b^2 + 2 c+ c- holds (b = a,
    c- = theta c+).  The line c_plus = a is accepted for every theta as the
    idealized perfectly-correlated boundary, even where it fails the
    determinant inequality (for theta > -1 it always does); that boundary
    carries the exactly decoherence-free configurations.  Inequalities are
    tested with absolute slack ``INEQUALITY_SLACK_TOL``.
    """
    a, cp, theta = env.a, env.c_plus, env.theta
    tol = INEQUALITY_SLACK_TOL
    if a < 1.0 - tol:
        return PhysicalityVerdict(False, f"a >= 1 violated: a = {a}")
    if cp > a + tol:
        return PhysicalityVerdict(False, f"c_plus <= a violated: c_plus = {cp}, a = {a}")
    if abs(theta) > 1.0 + tol:
        return PhysicalityVerdict(False, f"-1 <= theta <= 1 violated: theta = {theta}")
    if cp >= a - tol:
        return PhysicalityVerdict(True)
    cm = theta * cp
    det_sigma = (a * a - cp * cp) * (a * a - cm * cm)
    lhs = det_sigma + 1.0
    rhs = 2.0 * a * a + 2.0 * cp * cm
    if lhs < rhs - tol:
        return PhysicalityVerdict(
            False,
            f"det(sigma)+1 >= a^2+b^2+2c+c- violated: {lhs} < {rhs}",
        )
    return PhysicalityVerdict(True)


def require_physical(env: EnvCorrelation) -> None:
    """Raise :class:`DomainError` if ``env`` fails :func:`validate_physicality`."""
    verdict = validate_physicality(env)
    if not verdict:
        raise DomainError(f"unphysical environment: {verdict.violation}")


def correlation_coefficient(env: EnvCorrelation) -> float:
    """Position correlation coefficient c_plus / a, in [0, 1].

    0 means a product state, 1 the idealized strongly correlated (EPR)
    boundary.
    """
    require_physical(env)
    return env.c_plus / env.a


def to_covariance(env: EnvCorrelation) -> np.ndarray:
    """4x4 standard-form covariance matrix over R = (q1, p1, q2, p2).

    Diagonal (a, a, a, a); the only couplings are <q1 q2> = c_plus and
    <p1 p2> = theta * c_plus.
    """
    require_physical(env)
    a, cp = env.a, env.c_plus
    cm = env.theta * cp
    sigma = np.diag([a, a, a, a])
    sigma[0, 2] = sigma[2, 0] = cp
    sigma[1, 3] = sigma[3, 1] = cm
    return sigma


def env_from_covariance(cov: np.ndarray) -> EnvCorrelation:
    """Read (a, c_plus, theta) back from a standard-form covariance matrix.

    Exact inverse of :func:`to_covariance`.  Raises :class:`DomainError` if
    the matrix is not a symmetric standard-form matrix of a physical
    symmetric state.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        raise DomainError(f"covariance must be 4x4, got shape {cov.shape}")
    if not np.array_equal(cov, cov.T):
        raise DomainError("covariance must be symmetric")
    a = cov[0, 0]
    cp = cov[0, 2]
    cm = cov[1, 3]
    expected = np.diag([a, a, a, a])
    expected[0, 2] = expected[2, 0] = cp
    expected[1, 3] = expected[3, 1] = cm
    if not np.allclose(cov, expected, rtol=0.0, atol=0.0):
        raise DomainError("covariance is not in symmetric standard form")
    if cp == 0.0:
        env = EnvCorrelation(a=a, c_plus=0.0, theta=0.0 if cm == 0.0 else math.copysign(1.0, cm))
    else:
        env = EnvCorrelation(a=a, c_plus=cp, theta=cm / cp)
    require_physical(env)
    return env


def _phase_space_vector(alpha1: complex, alpha2: complex) -> np.ndarray:
    # D(alpha) = exp(i(Im(alpha) q + Re(alpha) p)) puts (Im, Re) on (q, p).
    return np.array([alpha1.imag, alpha1.real, alpha2.imag, alpha2.real])


def log_characteristic_function(cov: np.ndarray, alpha1: complex, alpha2: complex) -> float:
    """log of the Wigner characteristic function of a zero-mean Gaussian state.

    Returns -(1/2) Lambda^T sigma Lambda with Lambda built from the two
    displacements as documented in the module docstring.  Always <= 0 for a
    physical covariance.
    """
    env = env_from_covariance(cov)
    cov = np.asarray(cov, dtype=float)
    alpha1 = complex(alpha1)
    alpha2 = complex(alpha2)
    for alpha in (alpha1, alpha2):
        if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
            raise DomainError(f"displacement must be finite, got {alpha!r}")
    lam = _phase_space_vector(alpha1, alpha2)
    quad = float(lam @ cov @ lam)
    # Guard against rounding pushing the quadratic form slightly negative at
    # the EPR boundary, where its smallest eigenvalue is exactly zero.
    if quad < 0.0:
        if quad < -INEQUALITY_SLACK_TOL * (1.0 + env.a):
            raise DomainError(f"covariance quadratic form is negative: {quad}")
        quad = 0.0
    return -0.5 * quad


def characteristic_function(cov: np.ndarray, alpha1: complex, alpha2: complex) -> float:
    """Wigner characteristic function value, in (0, 1] for physical states."""
    return math.exp(log_characteristic_function(cov, alpha1, alpha2))
