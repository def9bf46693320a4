"""Gaussian state processes: prior kernels and exact path sampling.

Three process families describe how the tracked state evolves. Each is a
Gaussian process pinned down by a prior mean function and a covariance
kernel:

* ``brownian``: drifting Brownian motion started at an uncertain level.
  Mean ``mu*t``, covariance ``sigma0^2 + sigma^2*min(t, t')``.
* ``ou``: mean-reverting process with reversion rate ``alpha``. The default
  ``alpha = sigma^2 / (2*sigma0^2)`` makes the process stationary, with
  covariance ``sigma0^2 * exp(-alpha*|t - t'|)`` and marginal variance
  ``sigma0^2`` at every time. The general-``alpha`` kernel is exposed as
  :func:`ou_general_cov` and tends to the Brownian kernel as ``alpha -> 0``.
* ``linear``: straight line with random intercept (std ``sigma0``) and
  random slope (mean ``mu``, std ``sigma``). Mean ``mu*t``, covariance
  ``sigma0^2 + sigma^2*t*t'``.

Path sampling is exact on any time grid: Brownian paths accumulate
independent Gaussian increments, OU paths apply the exact one-step
transition, and linear paths draw (intercept, slope) once. There is no
discretization error, so sampled moments can be checked against the kernels
directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BrownianParams",
    "OUParams",
    "LinearParams",
    "ProcessSpec",
    "TimeGrid",
    "prior_mean",
    "prior_cov",
    "ou_general_cov",
    "sample_path",
    "sample_paths",
]


@dataclass(frozen=True)
class BrownianParams:
    """Drifting Brownian motion; ``sigma=0`` degenerates to a frozen level."""

    mu: float = 0.0
    sigma: float = 1.0
    sigma0: float = 1.0

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.sigma0 < 0:
            raise ValueError(f"sigma0 must be nonnegative, got {self.sigma0}")


@dataclass(frozen=True)
class OUParams:
    """Mean-reverting process. ``alpha=None`` selects the stationary rate."""

    sigma: float
    sigma0: float
    alpha: float | None = None

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.sigma0 <= 0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")
        if self.alpha is None:
            object.__setattr__(self, "alpha", self.stationary_alpha)
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def stationary_alpha(self) -> float:
        """Reversion rate at which the marginal variance stays at sigma0^2."""
        return self.sigma**2 / (2.0 * self.sigma0**2)

    @property
    def is_stationary(self) -> bool:
        return abs(self.alpha - self.stationary_alpha) <= 1e-12 * self.stationary_alpha


@dataclass(frozen=True)
class LinearParams:
    """Random line: intercept N(0, sigma0^2), slope N(mu, sigma^2)."""

    mu: float = 0.0
    sigma: float = 1.0
    sigma0: float = 1.0

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.sigma0 < 0:
            raise ValueError(f"sigma0 must be nonnegative, got {self.sigma0}")


_PARAM_TYPES = {
    "brownian": BrownianParams,
    "ou": OUParams,
    "linear": LinearParams,
}


@dataclass(frozen=True)
class ProcessSpec:
    """A process kind plus its matching parameter record."""

    kind: str
    params: BrownianParams | OUParams | LinearParams

    def __post_init__(self) -> None:
        if self.kind not in _PARAM_TYPES:
            raise ValueError(f"unknown process kind {self.kind!r}; expected one of {sorted(_PARAM_TYPES)}")
        expected = _PARAM_TYPES[self.kind]
        if not isinstance(self.params, expected):
            raise ValueError(
                f"kind {self.kind!r} requires {expected.__name__}, got {type(self.params).__name__}"
            )

    @classmethod
    def brownian(cls, mu: float = 0.0, sigma: float = 1.0, sigma0: float = 1.0) -> "ProcessSpec":
        return cls("brownian", BrownianParams(mu, sigma, sigma0))

    @classmethod
    def ou(cls, sigma: float = 1.0, sigma0: float = 1.0, alpha: float | None = None) -> "ProcessSpec":
        return cls("ou", OUParams(sigma, sigma0, alpha))

    @classmethod
    def linear(cls, mu: float = 0.0, sigma: float = 1.0, sigma0: float = 1.0) -> "ProcessSpec":
        return cls("linear", LinearParams(mu, sigma, sigma0))


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing, nonnegative observation times."""

    times: tuple[float, ...]

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.times)
        object.__setattr__(self, "times", times)
        if not times:
            raise ValueError("grid must contain at least one time")
        if times[0] < 0:
            raise ValueError(f"times must be nonnegative, got {times[0]}")
        for a, b in zip(times, times[1:]):
            if b <= a:
                raise ValueError(f"times must be strictly increasing, got {a} then {b}")

    @classmethod
    def uniform(cls, start: float, step: float, count: int) -> "TimeGrid":
        if step <= 0:
            raise ValueError(f"step must be positive, got {step}")
        if count < 1:
            raise ValueError(f"count must be at least 1, got {count}")
        return cls(tuple(start + step * k for k in range(count)))

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self):
        return iter(self.times)

    def __getitem__(self, i: int) -> float:
        return self.times[i]

    def spacings(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.times, self.times[1:]))


def _check_time(t: float) -> float:
    t = float(t)
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    return t


def prior_mean(spec: ProcessSpec, t: float) -> float:
    """Unconditional mean of the state at time ``t``."""
    t = _check_time(t)
    if spec.kind == "ou":
        return 0.0
    return spec.params.mu * t


def prior_cov(spec: ProcessSpec, t: float, t2: float) -> float:
    """Unconditional covariance of the state between times ``t`` and ``t2``."""
    t = _check_time(t)
    t2 = _check_time(t2)
    p = spec.params
    if spec.kind == "brownian":
        return p.sigma0**2 + p.sigma**2 * min(t, t2)
    if spec.kind == "linear":
        return p.sigma0**2 + p.sigma**2 * t * t2
    # OU: the stationary rate admits an exact closed form; any other rate
    # falls through to the general kernel.
    if p.is_stationary:
        return p.sigma0**2 * math.exp(-p.alpha * abs(t - t2))
    return ou_general_cov(p, t, t2)


def ou_general_cov(params: OUParams, t: float, t2: float) -> float:
    """OU covariance for an arbitrary reversion rate.

    ``sigma0^2 e^{-a(t+t')} + (sigma^2/2a)(e^{-a|t-t'|} - e^{-a(t+t')})``
    with ``a = alpha``. As ``alpha -> 0`` this tends to the Brownian kernel
    ``sigma0^2 + sigma^2*min(t, t')``.
    """
    t = _check_time(t)
    t2 = _check_time(t2)
    a = params.alpha
    both = math.exp(-a * (t + t2))
    gap = math.exp(-a * abs(t - t2))
    return params.sigma0**2 * both + params.sigma**2 / (2.0 * a) * (gap - both)


def sample_paths(spec: ProcessSpec, grid: TimeGrid, seed, n_paths: int) -> np.ndarray:
    """Draw ``n_paths`` exact state paths on ``grid``; shape (n_paths, len(grid)).

    ``seed`` may be an int, a ``numpy.random.SeedSequence``, or an existing
    ``numpy.random.Generator``. Draw order is fixed (one vector of standard
    normals per grid step, after one vector for the initial value), so a
    given seed always yields the same array.
    """
    if n_paths < 1:
        raise ValueError(f"n_paths must be at least 1, got {n_paths}")
    rng = np.random.default_rng(seed)
    times = np.asarray(grid.times)
    p = spec.params
    if spec.kind == "linear":
        theta0 = rng.standard_normal(n_paths) * p.sigma0
        beta = p.mu + rng.standard_normal(n_paths) * p.sigma
        return theta0[:, None] + beta[:, None] * times[None, :]

    out = np.empty((n_paths, len(times)))
    x = rng.standard_normal(n_paths) * p.sigma0
    prev = 0.0
    if spec.kind == "brownian":
        for j, t in enumerate(times):
            dt = t - prev
            x = x + p.mu * dt + rng.standard_normal(n_paths) * (p.sigma * math.sqrt(dt))
            out[:, j] = x
            prev = t
    else:  # ou, exact transition
        a = p.alpha
        for j, t in enumerate(times):
            dt = t - prev
            decay = math.exp(-a * dt)
            step_sd = math.sqrt(p.sigma**2 / (2.0 * a) * (1.0 - math.exp(-2.0 * a * dt)))
            x = x * decay + rng.standard_normal(n_paths) * step_sd
            out[:, j] = x
            prev = t
    return out


def sample_path(spec: ProcessSpec, grid: TimeGrid, seed) -> np.ndarray:
    """Draw one exact state path on ``grid``; shape (len(grid),)."""
    return sample_paths(spec, grid, seed, 1)[0]
