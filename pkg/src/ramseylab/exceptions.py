"""Exception types shared across the package."""


class RamseyLabError(Exception):
    """Base class for all package errors."""

    category = "error"


class DomainError(RamseyLabError, ValueError):
    """Input violates a documented precondition or invariant."""

    category = "domain"


class BudgetError(DomainError):
    """Interrogation time exceeds the total time budget."""

    category = "domain"


class SingularPointError(DomainError):
    """Fisher information requested at a point where p(1-p) = 0."""

    category = "domain"


class SolverError(RamseyLabError, RuntimeError):
    """Root finding failed to bracket or converge."""

    category = "solver"


class NumericalError(RamseyLabError, RuntimeError):
    """Numerical integration did not reach the requested accuracy."""

    category = "numerical"


class ConfigError(RamseyLabError, ValueError):
    """Command-line or config-file input is inconsistent or incomplete."""

    category = "config"
