#!/usr/bin/env python3
"""Regenerate the demo outputs: posterior-band figure, precision schedules,
and a patience sweep of the planning fixed point.

Usage:
    python3 scripts/run_figures.py [--output figures] [--seed N]

Everything is produced through the same code paths as the command line, so
reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

from gp_acquire.cli import main as cli_main
from gp_acquire.csvio import write_rows
from gp_acquire.strategies import solve_planning_V, steady_state_myopic

SCHEDULE_CONFIGS = ["figure2_brownian", "figure2_ou", "figure2_linear", "planning_sweep"]


def patience_sweep_csv(sigma: float, c: float, deltas) -> str:
    """Planning target V and steady precision/payoff across discount factors."""
    rows = []
    myopic_p, myopic_payoff = steady_state_myopic(sigma, 1.0, c)
    for delta in deltas:
        sol = solve_planning_V(sigma, c, delta)
        rows.append(
            [
                delta,
                sol.V,
                sol.steady_precision,
                sol.steady_payoff,
                sol.steady_precision - myopic_p,
                sol.steady_payoff - myopic_payoff,
            ]
        )
    buf = io.StringIO()
    write_rows(
        buf,
        ["delta", "V", "steady_precision", "steady_payoff", "precision_vs_myopic", "payoff_vs_myopic"],
        rows,
    )
    return buf.getvalue()


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--output", default="figures", metavar="DIR")
    parser.add_argument("--seed", type=int, default=None, metavar="N",
                        help="override every config's seed")
    args = parser.parse_args(argv)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)

    seed_args = [] if args.seed is None else ["--seed", str(args.seed)]

    code = cli_main(
        ["simulate", "figure1", "--format", "both", "--output", str(out), *seed_args]
    )
    if code != 0:
        return code
    print(f"wrote {out / 'figure1.csv'} and {out / 'figure1.svg'}")

    code = cli_main(["precisions", *SCHEDULE_CONFIGS, "--output", str(out), *seed_args])
    if code != 0:
        return code
    for name in SCHEDULE_CONFIGS:
        print(f"wrote {out / (name + '_precisions.csv')}")

    deltas = [k / 20 for k in range(20)]  # 0.00, 0.05, ..., 0.95
    sweep = patience_sweep_csv(sigma=1.0, c=0.25, deltas=deltas)
    (out / "patience_sweep.csv").write_text(sweep)
    print(f"wrote {out / 'patience_sweep.csv'}")

    sol = solve_planning_V(1.0, 0.25, 0.9)
    print(
        f"example: sigma=1, c=0.25, delta=0.9 -> V={sol.V:.6f} "
        f"(vs sqrt(c)={math.sqrt(0.25):.6f}), steady precision {sol.steady_precision:.6f}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(run())
