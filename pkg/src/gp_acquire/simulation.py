"""End-to-end scenario runs: sampled paths, realized signals, posterior curves.

Randomness is split into two named substreams derived from the scenario
seed via ``numpy.random.SeedSequence(seed).spawn(2)``:

* child 0 drives the state path (one standard-normal vector for the initial
  value, then one per grid step, in grid order);
* child 1 drives signal noise (one standard normal per step that buys
  positive precision, in grid order; zero-precision steps draw nothing).

Identical scenarios therefore reproduce bit-identical results. Posterior
variances depend only on times and precisions, never on the realized draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .posterior import (
    PosteriorSummary,
    SignalHistory,
    SignalRecord,
    gram_plus_noise,
    posterior_at,
    residual_variance_general,
)
from .processes import ProcessSpec, TimeGrid, prior_cov, prior_mean, sample_paths
from .strategies import (
    CostParams,
    StrategyStep,
    StrategyTrajectory,
    forward_looking_trajectory,
    myopic_trajectory,
)

__all__ = [
    "Scenario",
    "RunResult",
    "run_scenario",
    "discounted_objective",
    "monte_carlo_action_loss",
    "default_query_grid",
]

_MODES = ("myopic", "forward_looking", "fixed")


@dataclass(frozen=True)
class Scenario:
    process: ProcessSpec
    grid: TimeGrid
    cost: CostParams
    strategy: str = "myopic"
    fixed_precisions: tuple[float, ...] | None = None
    seed: int = 0
    query_times: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.strategy not in _MODES:
            raise ValueError(f"strategy must be one of {_MODES}, got {self.strategy!r}")
        if self.strategy == "fixed":
            if self.fixed_precisions is None:
                raise ValueError("strategy 'fixed' requires fixed_precisions")
            fixed = tuple(float(p) for p in self.fixed_precisions)
            object.__setattr__(self, "fixed_precisions", fixed)
            if len(fixed) != len(self.grid):
                raise ValueError(
                    f"fixed_precisions has {len(fixed)} entries for a grid of {len(self.grid)}"
                )
            if any(p < 0 for p in fixed):
                raise ValueError("fixed_precisions must be nonnegative")
        elif self.fixed_precisions is not None:
            raise ValueError("fixed_precisions is only valid with strategy 'fixed'")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.query_times is not None:
            object.__setattr__(self, "query_times", tuple(float(t) for t in self.query_times))


@dataclass(frozen=True)
class RunResult:
    trajectory: StrategyTrajectory
    realized_path: np.ndarray
    signal_values: tuple[float | None, ...]
    posterior_curves: tuple[tuple[PosteriorSummary, ...], ...]
    discounted_objective: float | None


def default_query_grid(grid: TimeGrid, count: int = 201) -> tuple[float, ...]:
    """Evenly spaced query times from 0 to one unit past the last grid time."""
    return tuple(np.linspace(0.0, grid[-1] + 1.0, count))


def _planned_trajectory(scn: Scenario) -> StrategyTrajectory:
    if scn.strategy == "myopic":
        return myopic_trajectory(scn.process, scn.grid, scn.cost.c)
    if scn.strategy == "forward_looking":
        if scn.process.kind != "brownian":
            raise ValueError("forward_looking strategy requires the brownian kernel")
        return forward_looking_trajectory(scn.process.params, scn.grid, scn.cost)
    # fixed: replay the given precisions, valuing each step at its own cost
    records: list[SignalRecord] = []
    steps: list[StrategyStep] = []
    for n, (t, p) in enumerate(zip(scn.grid, scn.fixed_precisions), start=1):
        records.append(SignalRecord(t, 0.0))
        r = residual_variance_general(scn.process, SignalHistory(tuple(records)), n).value
        records[-1] = SignalRecord(t, p)
        post = 1.0 / (1.0 / r + p) if r > 0 else 0.0
        steps.append(StrategyStep(n, t, r, p, post, post + scn.cost.c * p))
    return StrategyTrajectory(tuple(steps), "fixed")


def _split_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    path_seq, noise_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(path_seq), np.random.default_rng(noise_seq)


def run_scenario(scn: Scenario) -> RunResult:
    """Plan precisions, sample a path and its signals, and summarize posteriors.

    ``posterior_curves[k]`` conditions on the first ``k`` signals, so stage 0
    is the prior and the last stage uses the full history. The discounted
    objective is filled in only on uniformly spaced grids (its tail
    extension assumes a constant spacing).
    """
    traj = _planned_trajectory(scn)
    path_rng, noise_rng = _split_streams(scn.seed)
    path = sample_paths(scn.process, scn.grid, path_rng, 1)[0]
    values: list[float | None] = []
    records: list[SignalRecord] = []
    for step, theta in zip(traj.steps, path):
        if step.precision > 0:
            value = float(theta + noise_rng.standard_normal() / math.sqrt(step.precision))
        else:
            value = None
        values.append(value)
        records.append(SignalRecord(step.time, step.precision, value))
    history = SignalHistory(tuple(records))

    query = scn.query_times if scn.query_times is not None else default_query_grid(scn.grid)
    curves = tuple(
        tuple(posterior_at(scn.process, history.prefix(k), t) for t in query)
        for k in range(len(history) + 1)
    )

    spacings = scn.grid.spacings()
    uniform = all(abs(d - spacings[0]) <= 1e-9 * max(spacings[0], 1.0) for d in spacings) if spacings else True
    objective = discounted_objective(traj, scn.cost.delta) if uniform else None
    return RunResult(traj, path, tuple(values), curves, objective)


def discounted_objective(trajectory: StrategyTrajectory, delta: float, from_n: int = 1) -> float:
    """Discounted sum of step payoffs from step ``from_n`` (1-based) on.

    Steps from ``from_n`` must be uniformly spaced. The trajectory's final
    step is treated as its steady state and extended geometrically, so the
    infinite tail is summed in closed form (error zero once the trajectory
    has settled, and damped by ``delta^span`` regardless).
    """
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must be in [0, 1), got {delta}")
    steps = trajectory.steps[from_n - 1 :]
    if not steps:
        raise ValueError(f"from_n={from_n} leaves no steps (trajectory has {len(trajectory)})")
    t0 = steps[0].time
    total = sum(delta ** (s.time - t0) * s.payoff for s in steps)
    if delta == 0.0:
        return float(total)
    if len(steps) >= 2:
        dt = steps[1].time - steps[0].time
        for a, b in zip(steps, steps[1:]):
            if abs((b.time - a.time) - dt) > 1e-9 * max(dt, 1.0):
                raise ValueError("steps must be uniformly spaced for the geometric tail")
    else:
        dt = 1.0
    ratio = delta**dt
    tail = delta ** (steps[-1].time - t0) * steps[-1].payoff * ratio / (1.0 - ratio)
    return float(total + tail)


def monte_carlo_action_loss(scn: Scenario, draws: int) -> np.ndarray:
    """Mean squared error of the posterior-mean action at each step.

    The optimal action at step n is the posterior mean given the first n
    signals; its conditioning weights depend only on times and precisions,
    so they are precomputed once and the sampling is vectorized across
    draws. Uses the same two-substream seeding rule as :func:`run_scenario`
    (path draws shaped (draws, steps), then noise draws likewise).
    """
    if draws < 1:
        raise ValueError(f"draws must be at least 1, got {draws}")
    traj = _planned_trajectory(scn)
    precisions = traj.precisions
    times = list(scn.grid)
    n_steps = len(times)

    path_rng, noise_rng = _split_streams(scn.seed)
    paths = sample_paths(scn.process, scn.grid, path_rng, draws)
    noise = np.zeros((draws, n_steps))
    informative = precisions > 0
    if informative.any():
        raw = noise_rng.standard_normal((draws, int(informative.sum())))
        noise[:, informative] = raw / np.sqrt(precisions[informative])
    signals = paths + noise

    means = np.array([prior_mean(scn.process, t) for t in times])
    mse = np.empty(n_steps)
    for n in range(1, n_steps + 1):
        idx = [i for i in range(n) if informative[i]]
        target_mean = means[n - 1]
        if idx:
            sub = SignalHistory(tuple(SignalRecord(times[i], float(precisions[i])) for i in idx))
            sig = gram_plus_noise(scn.process, sub)
            cross = np.array([prior_cov(scn.process, times[n - 1], times[i]) for i in idx])
            weights = np.linalg.solve(sig, cross)
            actions = target_mean + (signals[:, idx] - means[idx]) @ weights
        else:
            actions = np.full(draws, target_mean)
        mse[n - 1] = float(np.mean((actions - paths[:, n - 1]) ** 2))
    return mse
