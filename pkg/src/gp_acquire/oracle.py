"""Brute-force verifiers for the precision rules.

These deliberately avoid the closed forms they are meant to check.

:func:`minimize_psi` minimizes the one-step objective
``1/(1/R + p) + c*p`` by golden-section search with an explicit comparison
against the ``p = 0`` boundary.

:func:`value_iterate` solves the discounted planning problem by Bellman
iteration on a residual-variance grid:

    W(R) = min over p >= 0 of  q + c*p + delta * W(q + sigma^2),
    q = 1/(1/R + p)

with linear interpolation for off-grid next states (clamped at the grid
edges) and the same golden-section-plus-boundary search inside each update.
The steady posterior variance is read off by iterating the converged
policy's state map to its fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .strategies import CostParams

__all__ = ["ScalarMinResult", "ValueIterationResult", "minimize_psi", "value_iterate"]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_BRACKET_WIDTH = 1e-10


@dataclass(frozen=True)
class ScalarMinResult:
    argmin: float
    min_value: float
    evaluations: int


@dataclass(frozen=True)
class ValueIterationResult:
    grid: np.ndarray
    value_fn: np.ndarray
    policy: np.ndarray
    fixed_point_V: float
    iterations: int
    sweep_deltas: tuple[float, ...]


def minimize_psi(residual_var: float, c: float) -> ScalarMinResult:
    """Golden-section minimum of the one-step objective on [0, 10/sqrt(c)]."""
    if residual_var <= 0:
        raise ValueError(f"residual_var must be positive, got {residual_var}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")

    def psi(p: float) -> float:
        return 1.0 / (1.0 / residual_var + p) + c * p

    a, b = 0.0, 10.0 / math.sqrt(c)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = psi(x1), psi(x2)
    evaluations = 2
    while b - a > _BRACKET_WIDTH:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = psi(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = psi(x2)
        evaluations += 1
    mid = 0.5 * (a + b)
    f_mid = psi(mid)
    f_zero = psi(0.0)
    evaluations += 2
    if f_zero <= f_mid:
        return ScalarMinResult(0.0, f_zero, evaluations)
    return ScalarMinResult(mid, f_mid, evaluations)


def _normalize_grid(r_grid) -> np.ndarray:
    if isinstance(r_grid, tuple) and len(r_grid) == 3:
        lo, hi, count = r_grid
        grid = np.linspace(float(lo), float(hi), int(count))
    else:
        grid = np.asarray(r_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("r_grid must be a 1-d grid with at least 2 points")
    if grid[0] <= 0:
        raise ValueError(f"grid must start above 0, got {grid[0]}")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    return grid


def value_iterate(
    sigma: float,
    cost: CostParams,
    r_grid,
    tol: float = 1e-10,
    max_sweeps: int = 100_000,
) -> ValueIterationResult:
    """Bellman iteration for the discounted problem on a residual-variance grid.

    ``r_grid`` is either an increasing 1-d array or a ``(lo, hi, count)``
    triple. Raises :class:`NumericalError` with the trailing sweep deltas if
    the sup-norm change has not dropped below ``tol`` within ``max_sweeps``.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    grid = _normalize_grid(r_grid)
    s2 = sigma**2
    c, delta = cost.c, cost.delta
    p_hi = 10.0 / math.sqrt(c)
    inv_r = 1.0 / grid

    def sweep(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        def objective(p: np.ndarray) -> np.ndarray:
            q = 1.0 / (inv_r + p)
            total = q + c * p
            if delta > 0.0:
                nxt = np.clip(q + s2, grid[0], grid[-1])
                total = total + delta * np.interp(nxt, grid, values)
            return total

        a = np.zeros_like(grid)
        b = np.full_like(grid, p_hi)
        # Vectorized golden section: shrink every bracket in lockstep until
        # all are narrower than the scalar search's stopping width.
        n_iter = int(math.ceil(math.log(_BRACKET_WIDTH / p_hi) / math.log(_INVPHI))) + 1
        for _ in range(n_iter):
            x1 = b - _INVPHI * (b - a)
            x2 = a + _INVPHI * (b - a)
            keep_left = objective(x1) < objective(x2)
            b = np.where(keep_left, x2, b)
            a = np.where(keep_left, a, x1)
        mid = 0.5 * (a + b)
        f_mid = objective(mid)
        f_zero = objective(np.zeros_like(grid))
        zero_wins = f_zero <= f_mid
        return np.where(zero_wins, f_zero, f_mid), np.where(zero_wins, 0.0, mid)

    values = np.zeros_like(grid)
    deltas: list[float] = []
    policy = np.zeros_like(grid)
    for iteration in range(1, max_sweeps + 1):
        new_values, policy = sweep(values)
        change = float(np.max(np.abs(new_values - values)))
        deltas.append(change)
        values = new_values
        if change < tol:
            break
    else:
        raise NumericalError(
            f"value iteration did not converge in {max_sweeps} sweeps; "
            f"last sup-norm changes: {[f'{d:.3e}' for d in deltas[-5:]]}"
        )

    # Steady state of the induced dynamics R -> 1/(1/R + p(R)) + sigma^2.
    r = float(grid[-1])
    for _ in range(5000):
        r_next = 1.0 / (1.0 / r + float(np.interp(r, grid, policy))) + s2
        if abs(r_next - r) < 1e-13:
            r = r_next
            break
        r = r_next
    return ValueIterationResult(
        grid=grid,
        value_fn=values,
        policy=policy,
        fixed_point_V=r - s2,
        iterations=iteration,
        sweep_deltas=tuple(deltas),
    )
