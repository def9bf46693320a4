"""Scenario configuration files (YAML) and their validation.

Configs are strict: unknown keys are rejected with the offending field
named, as are missing required keys and out-of-range values. See the
bundled files under ``gp_acquire/configs`` for working examples.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError
from .processes import ProcessSpec, TimeGrid
from .simulation import Scenario, default_query_grid
from .strategies import CostParams

__all__ = ["ScenarioConfig", "load_scenario_config", "parse_scenario_config", "bundled_config_names"]

_STRATEGIES = ("myopic", "forward_looking", "fixed")


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario plus presentation extras."""

    scenario: Scenario
    stem: str


def _as_mapping(node, field: str) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(field, f"expected a mapping, got {type(node).__name__}")
    return node


def _reject_unknown(node: dict, field: str, allowed: set[str]) -> None:
    unknown = sorted(set(node) - allowed)
    if unknown:
        raise ConfigError(f"{field}.{unknown[0]}", f"unknown key (allowed: {sorted(allowed)})")


def _number(node: dict, field: str, key: str, default=None) -> float:
    if key not in node:
        if default is not None:
            return default
        raise ConfigError(f"{field}.{key}", "required key is missing")
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{field}.{key}", f"expected a number, got {value!r}")
    return float(value)


def _build_process(node, field: str = "process") -> ProcessSpec:
    node = _as_mapping(node, field)
    kind = node.get("kind")
    if kind not in ("brownian", "ou", "linear"):
        raise ConfigError(f"{field}.kind", f"expected brownian, ou, or linear, got {kind!r}")
    try:
        if kind == "ou":
            _reject_unknown(node, field, {"kind", "sigma", "sigma0", "alpha"})
            alpha = None
            if "alpha" in node and node["alpha"] is not None:
                alpha = _number(node, field, "alpha")
            return ProcessSpec.ou(
                sigma=_number(node, field, "sigma"),
                sigma0=_number(node, field, "sigma0"),
                alpha=alpha,
            )
        _reject_unknown(node, field, {"kind", "mu", "sigma", "sigma0"})
        builder = ProcessSpec.brownian if kind == "brownian" else ProcessSpec.linear
        return builder(
            mu=_number(node, field, "mu", default=0.0),
            sigma=_number(node, field, "sigma"),
            sigma0=_number(node, field, "sigma0"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(field, str(exc)) from exc


def _build_grid(node, field: str = "grid") -> TimeGrid:
    node = _as_mapping(node, field)
    has_times = "times" in node
    has_uniform = any(k in node for k in ("start", "step", "count"))
    if has_times and has_uniform:
        raise ConfigError(field, "give either times or start/step/count, not both")
    try:
        if has_times:
            _reject_unknown(node, field, {"times"})
            times = node["times"]
            if not isinstance(times, list) or not times:
                raise ConfigError(f"{field}.times", "expected a non-empty list of numbers")
            return TimeGrid(tuple(float(t) for t in times))
        if has_uniform:
            _reject_unknown(node, field, {"start", "step", "count"})
            count = node.get("count")
            if not isinstance(count, int) or isinstance(count, bool):
                raise ConfigError(f"{field}.count", f"expected an integer, got {count!r}")
            return TimeGrid.uniform(
                _number(node, field, "start", default=0.0),
                _number(node, field, "step", default=1.0),
                count,
            )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(field, str(exc)) from exc
    raise ConfigError(field, "expected times or start/step/count")


def _build_query(node, grid: TimeGrid, field: str = "query") -> tuple[float, ...] | None:
    if node is None:
        return None
    node = _as_mapping(node, field)
    if "times" in node:
        _reject_unknown(node, field, {"times"})
        times = node["times"]
        if not isinstance(times, list) or not times:
            raise ConfigError(f"{field}.times", "expected a non-empty list of numbers")
        return tuple(float(t) for t in times)
    _reject_unknown(node, field, {"start", "stop", "count"})
    count = node.get("count", 201)
    if not isinstance(count, int) or isinstance(count, bool) or count < 2:
        raise ConfigError(f"{field}.count", f"expected an integer >= 2, got {count!r}")
    if "start" in node or "stop" in node:
        start = _number(node, field, "start")
        stop = _number(node, field, "stop")
        if stop <= start:
            raise ConfigError(f"{field}.stop", f"stop must exceed start, got {start}..{stop}")
        return tuple(np.linspace(start, stop, count))
    # bare count: the default span (0 to one past the last grid time)
    return default_query_grid(grid, count)


def parse_scenario_config(raw, source: str = "<config>") -> ScenarioConfig:
    """Validate a parsed YAML document and build the scenario it describes."""
    root = _as_mapping(raw, "config")
    _reject_unknown(
        root,
        "config",
        {"process", "grid", "cost", "strategy", "fixed_precisions", "seed", "query", "output"},
    )
    for key in ("process", "grid", "cost"):
        if key not in root:
            raise ConfigError(key, "required section is missing")
    process = _build_process(root["process"])
    grid = _build_grid(root["grid"])

    cost_node = _as_mapping(root["cost"], "cost")
    _reject_unknown(cost_node, "cost", {"c", "delta"})
    try:
        cost = CostParams(_number(cost_node, "cost", "c"), _number(cost_node, "cost", "delta", default=0.0))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("cost", str(exc)) from exc

    strategy = root.get("strategy", "myopic")
    if strategy not in _STRATEGIES:
        raise ConfigError("strategy", f"expected one of {_STRATEGIES}, got {strategy!r}")
    fixed = None
    if "fixed_precisions" in root:
        values = root["fixed_precisions"]
        if not isinstance(values, list):
            raise ConfigError("fixed_precisions", "expected a list of numbers")
        fixed = tuple(float(p) for p in values)

    seed = root.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0 or seed >= 2**64:
        raise ConfigError("seed", f"expected an unsigned 64-bit integer, got {seed!r}")

    query = _build_query(root.get("query"), grid)

    stem_default = Path(source).stem if source != "<config>" else "scenario"
    stem = stem_default
    if "output" in root and root["output"] is not None:
        out_node = _as_mapping(root["output"], "output")
        _reject_unknown(out_node, "output", {"stem"})
        if "stem" in out_node:
            stem = str(out_node["stem"])

    try:
        scenario = Scenario(
            process=process,
            grid=grid,
            cost=cost,
            strategy=strategy,
            fixed_precisions=fixed,
            seed=seed,
            query_times=query,
        )
    except ValueError as exc:
        raise ConfigError("config", str(exc)) from exc
    return ScenarioConfig(scenario=scenario, stem=stem)


def bundled_config_names() -> list[str]:
    """Names of the configs shipped inside the package."""
    root = resources.files("gp_acquire").joinpath("configs")
    return sorted(p.name[: -len(".yaml")] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_scenario_config(path_or_name: str) -> ScenarioConfig:
    """Load a config from a file path, or by bundled name if no file exists."""
    path = Path(path_or_name)
    if path.exists():
        text = path.read_text()
        source = str(path)
    else:
        name = path_or_name[: -len(".yaml")] if path_or_name.endswith(".yaml") else path_or_name
        candidate = resources.files("gp_acquire").joinpath("configs", f"{name}.yaml")
        if not candidate.is_file():
            raise ConfigError(
                "config",
                f"no file {path_or_name!r} and no bundled config of that name "
                f"(bundled: {bundled_config_names()})",
            )
        text = candidate.read_text()
        source = name
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"invalid YAML: {exc}") from exc
    return parse_scenario_config(raw, source)
