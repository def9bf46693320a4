"""Command-line interface.

    gp-acquire precisions [--output DIR] [--seed N] [--jobs K] CONFIG...
    gp-acquire simulate   [--output DIR] [--format csv|svg|both] [--seed N] [--jobs K] CONFIG...
    gp-acquire verify     SUITE
    gp-acquire steady     --sigma S --dt D --c C --delta DELTA [--sigma0 S0]

CONFIG is a YAML file path or the name of a bundled config (see
``gp_acquire/configs``). Exit codes: 0 success, 1 verification failure,
2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ScenarioConfig, bundled_config_names, load_scenario_config
from .csvio import write_rows
from .errors import ConfigError, NumericalError
from .simulation import RunResult, Scenario, run_scenario
from .strategies import forward_looking_trajectory, myopic_trajectory, solve_planning_V, steady_state_myopic
from .svgplot import StagePanel, render_panels
from .verify import SUITE_NAMES, run_suite

__all__ = ["main"]


def _precisions_rows(cfg: ScenarioConfig) -> tuple[list[str], list[list]]:
    scn = cfg.scenario
    myopic = myopic_trajectory(scn.process, scn.grid, scn.cost.c)
    forward = None
    if scn.cost.delta > 0:
        if scn.process.kind != "brownian":
            raise ConfigError(
                "cost.delta",
                "discount-aware precisions are only available for the brownian kernel",
            )
        forward = forward_looking_trajectory(scn.process.params, scn.grid, scn.cost)
    header = ["n", "t_n", "R_n", "p_star", "posterior_var", "payoff"]
    if forward is not None:
        header.insert(4, "p_dagger")
    rows = []
    for i, step in enumerate(myopic.steps):
        row: list = [step.n, step.time, step.residual_var, step.precision]
        if forward is not None:
            row.append(forward.steps[i].precision)
        row.extend([step.posterior_var, step.payoff])
        rows.append(row)
    return header, rows


def _write_or_print(text: str, directory: str | None, filename: str) -> None:
    if directory is None:
        sys.stdout.write(text)
    else:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text)


def cmd_precisions(args) -> int:
    configs = _load_all(args.configs, args.seed)
    if len(configs) > 1 and args.output is None:
        raise ConfigError("output", "multiple configs need --output so files do not interleave")

    def emit(cfg: ScenarioConfig) -> None:
        header, rows = _precisions_rows(cfg)
        buf = io.StringIO()
        write_rows(buf, header, rows)
        _write_or_print(buf.getvalue(), args.output, f"{cfg.stem}_precisions.csv")

    _for_each(configs, emit, args.jobs)
    return 0


def _simulate_csv(result: RunResult, scn: Scenario) -> str:
    header = ["series", "stage", "n", "t", "y", "lo", "hi", "precision"]
    rows: list[list] = []
    for step, theta in zip(result.trajectory.steps, result.realized_path):
        rows.append(["path", None, step.n, step.time, float(theta), None, None, None])
    for step, value in zip(result.trajectory.steps, result.signal_values):
        if value is not None:
            rows.append(["signal", None, step.n, step.time, value, None, None, step.precision])
    for stage, curve in enumerate(result.posterior_curves):
        for point in curve:
            sd = math.sqrt(point.variance)
            rows.append(
                [
                    "posterior",
                    stage,
                    None,
                    point.query_time,
                    point.mean,
                    point.mean - 1.96 * sd,
                    point.mean + 1.96 * sd,
                    None,
                ]
            )
    buf = io.StringIO()
    write_rows(buf, header, rows)
    return buf.getvalue()


def _simulate_svg(result: RunResult, scn: Scenario) -> str:
    panels = []
    times = list(scn.grid)
    for stage, curve in enumerate(result.posterior_curves):
        sds = [math.sqrt(p.variance) for p in curve]
        seen = [
            (t, v)
            for t, v in zip(times[:stage], result.signal_values[:stage])
            if v is not None
        ]
        panels.append(
            StagePanel(
                title="prior" if stage == 0 else f"after {stage} signal{'s' if stage > 1 else ''}",
                query_times=[p.query_time for p in curve],
                mean=[p.mean for p in curve],
                lo=[p.mean - 1.96 * s for p, s in zip(curve, sds)],
                hi=[p.mean + 1.96 * s for p, s in zip(curve, sds)],
                path_times=times,
                path_values=list(result.realized_path),
                marker_times=[t for t, _ in seen],
                marker_values=[v for _, v in seen],
            )
        )
    return render_panels(panels)


def cmd_simulate(args) -> int:
    configs = _load_all(args.configs, args.seed)
    if len(configs) > 1 and args.output is None:
        raise ConfigError("output", "multiple configs need --output so files do not interleave")
    if args.format in ("svg", "both") and args.output is None:
        raise ConfigError("output", "SVG output needs --output DIR")

    def emit(cfg: ScenarioConfig) -> None:
        result = run_scenario(cfg.scenario)
        if args.format in ("csv", "both"):
            _write_or_print(_simulate_csv(result, cfg.scenario), args.output, f"{cfg.stem}.csv")
        if args.format in ("svg", "both"):
            _write_or_print(_simulate_svg(result, cfg.scenario), args.output, f"{cfg.stem}.svg")

    _for_each(configs, emit, args.jobs)
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_steady(args) -> int:
    if args.dt <= 0:
        raise ConfigError("dt", f"must be positive, got {args.dt}")
    myopic_p, myopic_payoff = steady_state_myopic(args.sigma, args.dt, args.c)
    print(f"one-step rule:  precision {myopic_p:.12g}  payoff {myopic_payoff:.12g}")
    if args.delta > 0:
        sol = solve_planning_V(
            args.sigma * math.sqrt(args.dt), args.c, args.delta**args.dt, args.sigma0
        )
        t_bar = (sol.V - args.sigma0**2) / args.sigma**2
        print(
            f"planning rule:  V {sol.V:.12g}  threshold time {t_bar:.12g}  "
            f"precision {sol.steady_precision:.12g}  payoff {sol.steady_payoff:.12g}"
        )
        print(
            f"differences:    precision {sol.steady_precision - myopic_p:+.12g}  "
            f"payoff {sol.steady_payoff - myopic_payoff:+.12g}"
        )
    return 0


def _load_all(paths: list[str], seed_override: int | None) -> list[ScenarioConfig]:
    configs = []
    for path in paths:
        cfg = load_scenario_config(path)
        if seed_override is not None:
            scenario = dataclasses.replace(cfg.scenario, seed=seed_override)
            cfg = ScenarioConfig(scenario=scenario, stem=cfg.stem)
        configs.append(cfg)
    return configs


def _for_each(configs, fn, jobs: int) -> None:
    if jobs > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(fn, configs))
    else:
        for cfg in configs:
            fn(cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gp-acquire",
        description="Optimal sequential signal precisions for a Gaussian-process state.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_format: bool) -> None:
        p.add_argument("configs", nargs="+", metavar="CONFIG",
                       help="config file path or bundled name (e.g. figure1)")
        p.add_argument("--output", metavar="DIR", help="write files here instead of stdout")
        p.add_argument("--seed", type=int, metavar="N", help="override the config seed")
        p.add_argument("--jobs", type=int, default=1, metavar="K",
                       help="run multiple configs in parallel")
        if with_format:
            p.add_argument("--format", choices=("csv", "svg", "both"), default="csv")

    p = sub.add_parser("precisions", help="per-step precision schedule as CSV")
    add_common(p, with_format=False)
    p.set_defaults(func=cmd_precisions)

    p = sub.add_parser("simulate", help="sample a path and emit posterior curves")
    add_common(p, with_format=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run cross-check suites")
    p.add_argument("suite", choices=SUITE_NAMES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("steady", help="long-run precision and payoff")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--sigma0", type=float, default=0.0)
    p.set_defaults(func=cmd_steady)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
