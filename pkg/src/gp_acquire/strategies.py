"""Optimal signal-precision rules.

The one-step tradeoff: buying precision ``p`` against residual variance ``R``
costs ``c*p`` and leaves posterior variance ``1/(1/R + p)``, so the step
objective is ``psi(p) = 1/(1/R + p) + c*p``. Its minimizer is

    p* = max(1/sqrt(c) - 1/R, 0),   posterior variance = min(R, sqrt(c)).

A purchase happens exactly when ``R`` exceeds ``sqrt(c)``; ties buy nothing.

Closed-form trajectories apply this rule step by step:

* Brownian: wait until the unconditional variance ``sigma0^2 + sigma^2*t``
  crosses ``sqrt(c)`` (threshold time ``(sqrt(c) - sigma0^2) / sigma^2``),
  then pin the posterior at ``sqrt(c)`` forever. With ``sigma = 0`` the
  state is frozen: at most one purchase, then every later signal is worthless.
* Stationary OU: either ``sqrt(c) >= sigma0^2`` and no signal is ever bought,
  or every step buys, with the residual relaxing toward ``sigma0^2`` between
  purchases.
* Generic: any kernel, residual variances from the matrix route.

The forward-looking rule keeps the same shape but pins the posterior at the
root ``V`` of ``1/c = 1/V^2 - delta/(V + sigma^2)^2`` instead of ``sqrt(c)``.
``V`` is unique in ``(0, sqrt(c)]``, equals ``sqrt(c)`` exactly when
``delta = 0``, and decreases as ``delta`` grows: a patient agent buys more
than the one-step rule at every step where it buys at all. Uniform grids
with spacing ``dt != 1`` are handled by solving the fixed point with the
per-step quantities ``sigma^2*dt`` and ``delta^dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .posterior import residual_variance_general, SignalHistory, SignalRecord
from .processes import BrownianParams, OUParams, ProcessSpec, TimeGrid

__all__ = [
    "CostParams",
    "StrategyStep",
    "StrategyTrajectory",
    "PlanningSolution",
    "myopic_precision",
    "brownian_myopic_trajectory",
    "ou_myopic_trajectory",
    "generic_myopic_trajectory",
    "myopic_trajectory",
    "solve_planning_V",
    "forward_looking_trajectory",
    "steady_state_myopic",
]


@dataclass(frozen=True)
class CostParams:
    """Marginal precision cost ``c`` and per-unit-time discount ``delta``."""

    c: float
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must be in [0, 1), got {self.delta}")


@dataclass(frozen=True)
class StrategyStep:
    """One decision step: what the agent faced, bought, and paid."""

    n: int
    time: float
    residual_var: float
    precision: float
    posterior_var: float
    payoff: float


@dataclass(frozen=True)
class StrategyTrajectory:
    steps: tuple[StrategyStep, ...]
    mode: str  # "myopic" | "forward_looking" | "fixed"

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.steps])

    @property
    def precisions(self) -> np.ndarray:
        return np.array([s.precision for s in self.steps])

    @property
    def residual_vars(self) -> np.ndarray:
        return np.array([s.residual_var for s in self.steps])

    @property
    def posterior_vars(self) -> np.ndarray:
        return np.array([s.posterior_var for s in self.steps])

    @property
    def payoffs(self) -> np.ndarray:
        return np.array([s.payoff for s in self.steps])


@dataclass(frozen=True)
class PlanningSolution:
    """Fixed point of the forward-looking problem (unit-step quantities)."""

    V: float
    t_bar: float
    steady_precision: float
    steady_payoff: float


def myopic_precision(residual_var: float, c: float) -> tuple[float, float]:
    """One-step-optimal precision and resulting posterior variance."""
    if residual_var <= 0:
        raise ValueError(f"residual_var must be positive, got {residual_var}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    root = math.sqrt(c)
    precision = max(1.0 / root - 1.0 / residual_var, 0.0)
    return precision, min(residual_var, root)


def _step(n: int, t: float, r: float, p: float, post: float, c: float) -> StrategyStep:
    return StrategyStep(n, t, r, p, post, post + c * p)


def brownian_myopic_trajectory(params: BrownianParams, grid: TimeGrid, c: float) -> StrategyTrajectory:
    """One-step-optimal trajectory for the Brownian kernel, in closed form."""
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    root = math.sqrt(c)
    s2 = params.sigma**2
    steps: list[StrategyStep] = []
    if s2 == 0.0:
        # Frozen state: the residual never grows, so only the first step with
        # residual above sqrt(c) buys anything.
        r = params.sigma0**2
        for n, t in enumerate(grid, start=1):
            if r > root:
                p, post = 1.0 / root - 1.0 / r, root
            else:
                p, post = 0.0, r
            steps.append(_step(n, t, r, p, post, c))
            r = post
        return StrategyTrajectory(tuple(steps), "myopic")

    t_bar = (root - params.sigma0**2) / s2
    prev_t = None
    for n, t in enumerate(grid, start=1):
        unconditional = params.sigma0**2 + s2 * t
        if n == 1:
            r = unconditional
        else:
            dt = t - prev_t
            r = min(params.sigma0**2 + s2 * prev_t, root) + s2 * dt
        if t <= t_bar:
            p = 0.0
        elif n == 1 or t <= t_bar + (t - prev_t):
            p = 1.0 / root - 1.0 / unconditional
        else:
            p = 1.0 / root - 1.0 / (root + s2 * (t - prev_t))
        post = min(unconditional, root)
        steps.append(_step(n, t, r, p, post, c))
        prev_t = t
    return StrategyTrajectory(tuple(steps), "myopic")


def ou_myopic_trajectory(params: OUParams, grid: TimeGrid, c: float) -> StrategyTrajectory:
    """One-step-optimal trajectory for the stationary OU kernel, in closed form."""
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    if not params.is_stationary:
        raise ValueError(
            f"closed form requires the stationary rate alpha={params.stationary_alpha:.6g}, "
            f"got alpha={params.alpha:.6g}; use generic_myopic_trajectory instead"
        )
    root = math.sqrt(c)
    v0 = params.sigma0**2
    steps: list[StrategyStep] = []
    if root >= v0:
        # The marginal variance never exceeds the purchase threshold.
        for n, t in enumerate(grid, start=1):
            steps.append(_step(n, t, v0, 0.0, v0, c))
        return StrategyTrajectory(tuple(steps), "myopic")
    prev_t = None
    for n, t in enumerate(grid, start=1):
        if n == 1:
            r = v0
        else:
            rho2 = math.exp(-2.0 * params.alpha * (t - prev_t))
            r = rho2 * root + (1.0 - rho2) * v0
        steps.append(_step(n, t, r, 1.0 / root - 1.0 / r, root, c))
        prev_t = t
    return StrategyTrajectory(tuple(steps), "myopic")


def generic_myopic_trajectory(spec: ProcessSpec, grid: TimeGrid, c: float) -> StrategyTrajectory:
    """One-step-optimal trajectory for any kernel via matrix residual variances."""
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    records: list[SignalRecord] = []
    steps: list[StrategyStep] = []
    for n, t in enumerate(grid, start=1):
        records.append(SignalRecord(t, 0.0))
        r = residual_variance_general(spec, SignalHistory(tuple(records)), n).value
        if r == 0.0:
            p, post = 0.0, 0.0  # state already known exactly; buying is waste
        else:
            p, post = myopic_precision(r, c)
        records[-1] = SignalRecord(t, p)
        steps.append(_step(n, t, r, p, post, c))
    return StrategyTrajectory(tuple(steps), "myopic")


def myopic_trajectory(spec: ProcessSpec, grid: TimeGrid, c: float) -> StrategyTrajectory:
    """Route to the closed form matching the kernel, else the matrix engine."""
    if spec.kind == "brownian":
        return brownian_myopic_trajectory(spec.params, grid, c)
    if spec.kind == "ou" and spec.params.is_stationary:
        return ou_myopic_trajectory(spec.params, grid, c)
    return generic_myopic_trajectory(spec, grid, c)


def solve_planning_V(sigma: float, c: float, delta: float, sigma0: float = 0.0) -> PlanningSolution:
    """Solve ``1/c = 1/V^2 - delta/(V + sigma^2)^2`` for the planning target V.

    The left side minus the right is strictly increasing in V, so bisection
    on ``(0, sqrt(c)]`` pins the unique root; the bracket is halved until it
    cannot shrink further in floating point. ``delta = 0`` returns
    ``sqrt(c)`` exactly. ``sigma0`` only feeds the reported threshold time
    ``t_bar = (V - sigma0^2) / sigma^2``.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must be in [0, 1), got {delta}")
    root = math.sqrt(c)
    s2 = sigma**2
    if delta == 0.0:
        v = root
    else:
        def gap(x: float) -> float:
            return 1.0 / x**2 - delta / (x + s2) ** 2 - 1.0 / c

        lo, hi = 1e-12 * root, root
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if gap(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        v = 0.5 * (lo + hi)
    steady_precision = 1.0 / v - 1.0 / (v + s2)
    return PlanningSolution(
        V=v,
        t_bar=(v - sigma0**2) / s2,
        steady_precision=steady_precision,
        steady_payoff=v + c * steady_precision,
    )


def forward_looking_trajectory(
    params: BrownianParams, grid: TimeGrid, cost: CostParams
) -> StrategyTrajectory:
    """Discount-aware trajectory for the Brownian kernel on a uniform grid.

    Identical in shape to the one-step rule with ``sqrt(c)`` replaced by the
    planning target V. Requires ``sigma > 0`` and uniform spacing; spacing
    ``dt != 1`` enters through the per-step quantities ``sigma^2*dt`` and
    ``delta^dt`` when solving for V.
    """
    if params.sigma <= 0:
        raise ValueError("the forward-looking rule needs sigma > 0")
    spacings = grid.spacings()
    dt = spacings[0] if spacings else 1.0
    for d in spacings:
        if abs(d - dt) > 1e-9 * max(dt, 1.0):
            raise ValueError(f"grid must be uniformly spaced, got spacings {spacings[:4]}...")
    sol = solve_planning_V(params.sigma * math.sqrt(dt), cost.c, cost.delta**dt, params.sigma0)
    v = sol.V
    s2 = params.sigma**2
    t_bar = (v - params.sigma0**2) / s2
    steps: list[StrategyStep] = []
    prev_t = None
    for n, t in enumerate(grid, start=1):
        unconditional = params.sigma0**2 + s2 * t
        if n == 1:
            r = unconditional
        else:
            r = min(params.sigma0**2 + s2 * prev_t, v) + s2 * dt
        if t <= t_bar:
            p = 0.0
        elif n == 1 or t <= t_bar + dt:
            p = 1.0 / v - 1.0 / unconditional
        else:
            p = 1.0 / v - 1.0 / (v + s2 * dt)
        post = min(unconditional, v)
        steps.append(_step(n, t, r, p, post, cost.c))
        prev_t = t
    return StrategyTrajectory(tuple(steps), "forward_looking")


def steady_state_myopic(sigma: float, dt: float, c: float) -> tuple[float, float]:
    """Long-run per-step precision and payoff of the one-step rule.

    Both increase in ``sigma^2*dt``: faster-moving states are watched more
    closely and cost more to track.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    root = math.sqrt(c)
    x = sigma**2 * dt
    return 1.0 / root - 1.0 / (root + x), 2.0 * root - c / (root + x)
