"""Exception types shared across the package."""

from __future__ import annotations


class NumericalError(RuntimeError):
    """A numerical procedure failed (singular system, non-convergence)."""


class SingularSystemError(NumericalError):
    """A signal covariance matrix is singular or too ill-conditioned to trust.

    Carries the signal times that produced the offending matrix so callers
    can see which records collide.
    """

    def __init__(self, times, condition: float | None = None):
        self.times = tuple(float(t) for t in times)
        self.condition = condition
        detail = f"condition estimate {condition:.3e}" if condition is not None else "factorization failed"
        super().__init__(
            f"signal covariance for times {list(self.times)} is numerically singular ({detail})"
        )


class ConfigError(ValueError):
    """A scenario configuration is malformed. ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
