"""Exact Gaussian posterior inference over signal histories.

A signal at time ``t_i`` with precision ``p_i > 0`` is the state value plus
independent ``N(0, 1/p_i)`` noise. Conditioning the state on finitely many
such signals is multivariate-normal conditioning:

    theta(t) | s_1..s_m  ~  N( m(t) + w' S^-1 (y - E[y]),  k(t,t) - w' S^-1 w )

where ``S`` is the signal covariance (the Gram matrix of the signal times
plus ``1/p_i`` on the diagonal) and ``w`` holds the cross covariances
``k(t, t_i)``. Zero-precision signals carry no information: they are dropped
before any matrix is formed, which is the exact limit of an infinite noise
entry on the diagonal. Posterior variances never touch realized signal
values; only posterior means do.

``residual_variance_*`` computes the variance of the state at step ``n``
given the signals bought strictly before ``n``. The general matrix route
works for any kernel; the scalar recursions exploit the Markov structure of
the Brownian and OU kernels and are much cheaper:

    R_n = beta_n^2 * Var(theta(t_{n-1}) | first n-1 signals) + gamma_n

with ``beta_n = k(t_n, t_{n-1}) / k(t_{n-1}, t_{n-1})`` and ``gamma_n`` the
one-step conditional variance. Under one-step-optimal play the recursion
unrolls into a closed form: the running posterior variance is either the
step-1 prior variance or got capped at ``sqrt(c)`` at some earlier step, so
``R_n`` is the minimum over n seeded backward chains
(:func:`residual_variance_markov_closed`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SingularSystemError
from .processes import ProcessSpec, TimeGrid, prior_cov, prior_mean

__all__ = [
    "SignalRecord",
    "SignalHistory",
    "PosteriorSummary",
    "ResidualVariance",
    "gram_plus_noise",
    "posterior_at",
    "posterior_variance_at",
    "residual_variance_general",
    "residual_variance_brownian",
    "residual_variance_markov",
    "residual_variance_markov_closed",
]

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class SignalRecord:
    """One signal purchase: time, precision bought, optional realized value."""

    time: float
    precision: float
    value: float | None = None

    def __post_init__(self) -> None:
        if self.time < 0:
            raise ValueError(f"time must be nonnegative, got {self.time}")
        if self.precision < 0:
            raise ValueError(f"precision must be nonnegative, got {self.precision}")


@dataclass(frozen=True)
class SignalHistory:
    """Signal records at strictly increasing times."""

    records: tuple[SignalRecord, ...]

    def __post_init__(self) -> None:
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        for a, b in zip(records, records[1:]):
            if b.time <= a.time:
                raise ValueError(f"record times must be strictly increasing, got {a.time} then {b.time}")

    @classmethod
    def from_arrays(
        cls,
        times: Sequence[float],
        precisions: Sequence[float],
        values: Sequence[float | None] | None = None,
    ) -> "SignalHistory":
        if len(times) != len(precisions):
            raise ValueError("times and precisions must have equal length")
        if values is None:
            values = [None] * len(times)
        elif len(values) != len(times):
            raise ValueError("values must match times in length")
        return cls(tuple(SignalRecord(t, p, v) for t, p, v in zip(times, precisions, values)))

    def __len__(self) -> int:
        return len(self.records)

    def prefix(self, k: int) -> "SignalHistory":
        return SignalHistory(self.records[:k])

    def informative(self) -> tuple[SignalRecord, ...]:
        return tuple(r for r in self.records if r.precision > 0)


@dataclass(frozen=True)
class PosteriorSummary:
    query_time: float
    mean: float
    variance: float


@dataclass(frozen=True)
class ResidualVariance:
    """Variance of the state at step ``n`` before its own signal arrives."""

    n: int
    value: float


def _gram(spec: ProcessSpec, times: Sequence[float]) -> np.ndarray:
    m = len(times)
    out = np.empty((m, m))
    for i, ti in enumerate(times):
        for j in range(i, m):
            out[i, j] = out[j, i] = prior_cov(spec, ti, times[j])
    return out


def gram_plus_noise(spec: ProcessSpec, history: SignalHistory) -> np.ndarray:
    """Signal covariance matrix: Gram of the signal times plus 1/p_i diagonal.

    Every record must have positive precision; a zero-precision record has
    an infinite noise entry and must be dropped by the caller before this
    matrix is formed (it carries no information).
    """
    dead = [r.time for r in history.records if r.precision == 0]
    if dead:
        raise ValueError(
            f"zero-precision records at times {dead} have no finite noise variance; "
            "filter them out before forming the signal covariance"
        )
    times = [r.time for r in history.records]
    out = _gram(spec, times)
    for i, r in enumerate(history.records):
        out[i, i] += 1.0 / r.precision
    return out


def _solve_spd(matrix: np.ndarray, rhs: np.ndarray, times: Sequence[float]) -> np.ndarray:
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularSystemError(times, cond if np.isfinite(cond) else None)
    try:
        chol = np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        raise SingularSystemError(times) from None
    half = np.linalg.solve(chol, rhs)
    return np.linalg.solve(chol.T, half)


def _conditioning_blocks(
    spec: ProcessSpec, records: Sequence[SignalRecord], t: float
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    times = [r.time for r in records]
    sig = _gram(spec, times)
    for i, r in enumerate(records):
        sig[i, i] += 1.0 / r.precision
    cross = np.array([prior_cov(spec, t, ti) for ti in times])
    return sig, cross, times


def posterior_variance_at(spec: ProcessSpec, history: SignalHistory, t: float) -> float:
    """Posterior variance of the state at ``t``; ignores realized values."""
    recs = history.informative()
    base = prior_cov(spec, t, t)
    if not recs:
        return base
    sig, cross, times = _conditioning_blocks(spec, recs, t)
    reduction = float(cross @ _solve_spd(sig, cross, times))
    return max(base - reduction, 0.0)


def posterior_at(spec: ProcessSpec, history: SignalHistory, t: float) -> PosteriorSummary:
    """Posterior mean and variance of the state at ``t`` given ``history``.

    Zero-precision records are ignored. Realized values are required on all
    informative records (the variance alone never needs them; see
    :func:`posterior_variance_at`).
    """
    recs = history.informative()
    base_mean = prior_mean(spec, t)
    base_var = prior_cov(spec, t, t)
    if not recs:
        return PosteriorSummary(t, base_mean, base_var)
    missing = [r.time for r in recs if r.value is None]
    if missing:
        raise ValueError(
            f"informative records at times {missing} have no realized value; "
            "posterior means need signal values (variances do not)"
        )
    sig, cross, times = _conditioning_blocks(spec, recs, t)
    centered = np.array([r.value - prior_mean(spec, r.time) for r in recs])
    rhs = np.column_stack([cross, centered])
    solved = _solve_spd(sig, rhs, times)
    variance = max(base_var - float(cross @ solved[:, 0]), 0.0)
    mean = base_mean + float(cross @ solved[:, 1])
    return PosteriorSummary(t, mean, variance)


def residual_variance_general(spec: ProcessSpec, history: SignalHistory, n: int) -> ResidualVariance:
    """Variance of the state at step ``n`` given signals 1..n-1, any kernel.

    ``n`` is 1-based. Zero-precision earlier signals are dropped (the exact
    infinite-noise limit). The step-n record's own precision is ignored:
    this is the variance the step-n purchase decision faces.
    """
    if not 1 <= n <= len(history):
        raise ValueError(f"n must be in 1..{len(history)}, got {n}")
    t_n = history.records[n - 1].time
    base = prior_cov(spec, t_n, t_n)
    kept = [r for r in history.records[: n - 1] if r.precision > 0]
    if not kept or base == 0.0:
        # A deterministic state (zero prior variance) stays at zero residual
        # variance no matter what was observed.
        return ResidualVariance(n, base)
    times = [r.time for r in kept] + [t_n]
    mat = _gram(spec, times)
    for i, r in enumerate(kept):
        mat[i, i] += 1.0 / r.precision
    unit = np.zeros(len(times))
    unit[-1] = 1.0
    inv_col = _solve_spd(mat, unit, times)
    return ResidualVariance(n, 1.0 / float(inv_col[-1]))


def residual_variance_brownian(prev_posterior_var: float, dt: float, sigma: float) -> float:
    """Brownian one-step update: last posterior variance plus sigma^2*dt."""
    if prev_posterior_var <= 0:
        raise ValueError(f"prev_posterior_var must be positive, got {prev_posterior_var}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    return prev_posterior_var + sigma**2 * dt


def _markov_coeffs(spec: ProcessSpec, t_prev: float, t_cur: float) -> tuple[float, float]:
    if spec.kind == "linear":
        raise ValueError("the linear kernel is not Markov; use residual_variance_general")
    var_prev = prior_cov(spec, t_prev, t_prev)
    if var_prev <= 0:
        raise ValueError(f"prior variance vanishes at t={t_prev}; the one-step regression is undefined")
    cov = prior_cov(spec, t_cur, t_prev)
    beta = cov / var_prev
    gamma = prior_cov(spec, t_cur, t_cur) - beta * cov
    return beta, gamma


def residual_variance_markov(
    spec: ProcessSpec, grid: TimeGrid, posterior_vars: Sequence[float], n: int
) -> float:
    """One-step residual variance for Markov kernels (Brownian, OU).

    ``posterior_vars[i]`` is the posterior variance at step ``i+1`` (after
    that step's signal); only the entry for step ``n-1`` is read.
    """
    if n < 2 or n > len(grid):
        raise ValueError(f"n must be in 2..{len(grid)}, got {n}")
    beta, gamma = _markov_coeffs(spec, grid[n - 2], grid[n - 1])
    return beta**2 * posterior_vars[n - 2] + gamma


def residual_variance_markov_closed(spec: ProcessSpec, grid: TimeGrid, c: float, n: int) -> float:
    """Residual variance at step ``n`` under one-step-optimal play, in closed form.

    The running posterior variance entering step ``n`` is either the step-1
    prior variance propagated the whole way, or ``sqrt(c)`` planted at some
    intermediate step (whenever a purchase occurred); optimal play makes the
    realized value the smallest of these candidates:

        min over i in 1..n-1 of  sqrt(c) * prod_{j<i} beta_{n-j}^2
                                 + sum_{j<i} gamma_{n-j} prod_{k<j} beta_{n-k}^2
        and the same chain of length n-1 seeded with Var(theta(t_1)).
    """
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    if n < 1 or n > len(grid):
        raise ValueError(f"n must be in 1..{len(grid)}, got {n}")
    if n == 1:
        return prior_cov(spec, grid[0], grid[0])
    root = c**0.5
    best = np.inf
    prod = 1.0
    acc = 0.0
    for j in range(n - 1):
        step = n - j  # walk the chain backward: coefficients of step-1 -> step
        beta, gamma = _markov_coeffs(spec, grid[step - 2], grid[step - 1])
        acc += gamma * prod
        prod *= beta**2
        best = min(best, root * prod + acc)
    return min(best, prior_cov(spec, grid[0], grid[0]) * prod + acc)
