"""Exception types shared across the package."""


class WeakfError(Exception):
    """Base class for all package errors."""


class DomainError(WeakfError):
    """Scalar-field evaluation hit a singularity (division by zero, log of
    a nonpositive number, fractional power of a nonpositive number)."""


class SingularMetric(WeakfError):
    """The metric matrix is singular or not positive definite at a point."""


class NotInContactDistribution(WeakfError):
    """A vector expected to lie in the contact distribution has a
    nonnegligible component along the structure vector fields."""


class DegenerateSpectrum(WeakfError):
    """Eigenvalue clusters of the shape operator overlap, so the
    eigen-distribution split is ill-defined at this point."""


class HypothesisUnmet(WeakfError):
    """A conditional identity was requested but its hypothesis predicate
    fails on the given structure/sample set."""

    def __init__(self, name: str, residual: float, tolerance: float):
        self.name = name
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"hypothesis {name!r} unmet: residual {residual:.3e} > tol {tolerance:.3e}"
        )


class ConfigError(WeakfError):
    """Invalid example or run configuration."""
