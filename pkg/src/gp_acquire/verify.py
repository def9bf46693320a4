"""Cross-checks between independent computation routes.

Each check pits a closed form against a brute-force or structurally
different computation and reports the worst deviation against a fixed
tolerance. The CLI ``verify`` subcommand prints these results; the test
suite asserts them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oracle import minimize_psi, value_iterate
from .posterior import (
    SignalHistory,
    SignalRecord,
    posterior_variance_at,
    residual_variance_general,
    residual_variance_markov,
    residual_variance_markov_closed,
)
from .processes import OUParams, ProcessSpec, TimeGrid, ou_general_cov, prior_cov
from .strategies import (
    CostParams,
    generic_myopic_trajectory,
    myopic_precision,
    solve_planning_V,
)

__all__ = ["CheckResult", "SUITE_NAMES", "run_suite"]

SUITE_NAMES = ("myopic-oracle", "matrix-vs-recursion", "planning-dp", "kernel-limits", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: max deviation {self.max_deviation:.3e} (tolerance {self.tolerance:.1e}) {status}"


def check_myopic_oracle(cases: int = 1000, seed: int = 20240601) -> list[CheckResult]:
    """Golden-section argmin of the step objective vs the closed-form rule."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        r = float(10.0 ** rng.uniform(-2, 2))
        c = float(10.0 ** rng.uniform(-2, 2))
        found = minimize_psi(r, c).argmin
        expected, _ = myopic_precision(r, c)
        worst = max(worst, abs(found - expected))
    return [CheckResult("one-step argmin, search vs formula", worst, 1e-6)]


def _random_scenarios(count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        kind = rng.choice(["brownian", "ou"])
        sigma = float(rng.uniform(0.3, 2.0))
        sigma0 = float(rng.uniform(0.3, 2.0))
        if kind == "brownian":
            spec = ProcessSpec.brownian(mu=float(rng.uniform(-1, 1)), sigma=sigma, sigma0=sigma0)
        else:
            spec = ProcessSpec.ou(sigma=sigma, sigma0=sigma0)
        n = int(rng.integers(2, 16))
        increments = rng.uniform(0.1, 0.8, size=n)
        times = np.concatenate([[rng.uniform(0.0, 0.5)], increments]).cumsum()[:n]
        grid = TimeGrid(tuple(times))
        c = float(rng.uniform(0.05, 1.0))
        yield spec, grid, c, rng


def check_matrix_vs_recursion(scenarios: int = 100, seed: int = 20240602) -> list[CheckResult]:
    """Matrix residual variances vs the scalar one-step recursion, and the
    optimal-play closed form vs iterating that recursion."""
    worst_recursion = 0.0
    worst_closed = 0.0
    for spec, grid, c, rng in _random_scenarios(scenarios, seed):
        # arbitrary play: mix of zero and positive precisions
        precisions = np.where(rng.uniform(size=len(grid)) < 0.4, 0.0, rng.uniform(0.1, 5.0, len(grid)))
        history = SignalHistory.from_arrays(list(grid), precisions.tolist())
        posterior_vars = [
            posterior_variance_at(spec, history.prefix(k + 1), grid[k]) for k in range(len(grid))
        ]
        for n in range(2, len(grid) + 1):
            via_matrix = residual_variance_general(spec, history, n).value
            via_recursion = residual_variance_markov(spec, grid, posterior_vars, n)
            worst_recursion = max(worst_recursion, abs(via_matrix - via_recursion))

        # optimal play: closed form vs iterating the recursion under the rule
        root = math.sqrt(c)
        posts: list[float] = []
        for n in range(1, len(grid) + 1):
            if n == 1:
                running = prior_cov(spec, grid[0], grid[0])
            else:
                running = residual_variance_markov(spec, grid, posts, n)
            posts.append(min(running, root))
            closed = residual_variance_markov_closed(spec, grid, c, n)
            worst_closed = max(worst_closed, abs(closed - running))
    return [
        CheckResult("residual variance, matrix vs recursion", worst_recursion, 1e-8),
        CheckResult("residual variance, closed form vs iterated recursion", worst_closed, 1e-10),
    ]


def check_planning_dp(
    sigma: float = 1.0, c: float = 0.25, delta: float = 0.9, points: int = 2000
) -> list[CheckResult]:
    """Value-iteration steady state vs the planning fixed-point root."""
    sol = solve_planning_V(sigma, c, delta)
    lo = min(math.sqrt(c), sigma**2) / 8.0
    hi = 4.0 * (1.0 + sigma**2)
    dp = value_iterate(sigma, CostParams(c, delta), (lo, hi, points))
    gap_v = abs(dp.fixed_point_V - sol.V)
    steady_r = sol.V + sigma**2
    dp_precision = float(np.interp(steady_r, dp.grid, dp.policy))
    gap_p = abs(dp_precision - sol.steady_precision)
    residual = abs(1.0 / c - 1.0 / sol.V**2 + delta / (sol.V + sigma**2) ** 2)
    return [
        CheckResult("planning fixed point, root residual", residual, 1e-10),
        CheckResult("planning steady variance, dynamic program vs root", gap_v, 1e-3),
        CheckResult("planning steady precision, dynamic program vs root", gap_p, 1e-3),
    ]


def check_kernel_limits() -> list[CheckResult]:
    """Small-reversion OU kernel against the Brownian kernel it limits to."""
    sigma, sigma0 = 1.0, 1.0
    times = [0.0, 1.0, 2.0, 3.0, 4.0]
    brown = ProcessSpec.brownian(sigma=sigma, sigma0=sigma0)
    devs = []
    for alpha in (1e-2, 1e-4, 1e-6):
        params = OUParams(sigma=sigma, sigma0=sigma0, alpha=alpha)
        devs.append(
            max(
                abs(ou_general_cov(params, s, t) - prior_cov(brown, s, t))
                for s in times
                for t in times
            )
        )
    results = [CheckResult("OU kernel at alpha=1e-6 vs Brownian kernel", devs[-1], 1e-4)]
    monotone = 0.0 if devs[0] > devs[1] > devs[2] else math.inf
    results.append(CheckResult("OU-to-Brownian deviation shrinks with alpha", monotone, 1.0))
    return results


def check_optimal_play_matrix(scenarios: int = 40, seed: int = 20240603) -> list[CheckResult]:
    """Closed form vs the matrix engine under the one-step rule."""
    worst = 0.0
    for spec, grid, c, _ in _random_scenarios(scenarios, seed):
        traj = generic_myopic_trajectory(spec, grid, c)
        for step in traj.steps:
            closed = residual_variance_markov_closed(spec, grid, c, step.n)
            worst = max(worst, abs(closed - step.residual_var))
    return [CheckResult("residual variance, closed form vs matrix engine", worst, 1e-8)]


_SUITES = {
    "myopic-oracle": (check_myopic_oracle,),
    "matrix-vs-recursion": (check_matrix_vs_recursion, check_optimal_play_matrix),
    "planning-dp": (check_planning_dp,),
    "kernel-limits": (check_kernel_limits,),
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        out: list[CheckResult] = []
        for checks in _SUITES.values():
            for check in checks:
                out.extend(check())
        return out
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITE_NAMES}")
    out = []
    for check in _SUITES[name]:
        out.extend(check())
    return out
