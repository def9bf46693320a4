"""Command-line surface: configs, CSV/SVG emission, exit codes."""

import io

import numpy as np
import pytest

from gp_acquire import ConfigError
from gp_acquire.cli import main
from gp_acquire.config import bundled_config_names, load_scenario_config, parse_scenario_config
from gp_acquire.csvio import format_cell, read_rows, write_rows
from gp_acquire.svgplot import StagePanel, render_panels

MINIMAL = """
process: {kind: brownian, sigma: 1.0, sigma0: 1.0}
grid: {start: 0.0, step: 1.0, count: 4}
cost: {c: 0.25}
"""


# --- config parsing ---------------------------------------------------------


def test_minimal_config_defaults():
    import yaml

    cfg = parse_scenario_config(yaml.safe_load(MINIMAL), "demo.yaml")
    assert cfg.stem == "demo"
    scn = cfg.scenario
    assert scn.strategy == "myopic"
    assert scn.seed == 0
    assert scn.cost.delta == 0.0
    assert scn.query_times is None
    assert list(scn.grid) == [0.0, 1.0, 2.0, 3.0]


def test_config_rejects_unknown_keys():
    import yaml

    raw = yaml.safe_load(MINIMAL)
    raw["procss"] = {}
    with pytest.raises(ConfigError, match="procss"):
        parse_scenario_config(raw)
    raw = yaml.safe_load(MINIMAL)
    raw["process"]["speed"] = 3
    with pytest.raises(ConfigError, match="process.speed"):
        parse_scenario_config(raw)


def test_config_field_errors_name_the_field():
    import yaml

    raw = yaml.safe_load(MINIMAL)
    del raw["cost"]
    with pytest.raises(ConfigError, match="cost"):
        parse_scenario_config(raw)
    raw = yaml.safe_load(MINIMAL)
    raw["cost"] = {"c": -1.0}
    with pytest.raises(ConfigError, match="cost"):
        parse_scenario_config(raw)
    raw = yaml.safe_load(MINIMAL)
    raw["grid"] = {"times": [2.0, 1.0]}
    with pytest.raises(ConfigError, match="grid"):
        parse_scenario_config(raw)
    raw = yaml.safe_load(MINIMAL)
    raw["grid"] = {"times": [0.0, 1.0], "count": 5}
    with pytest.raises(ConfigError, match="grid"):
        parse_scenario_config(raw)
    raw = yaml.safe_load(MINIMAL)
    raw["seed"] = -3
    with pytest.raises(ConfigError, match="seed"):
        parse_scenario_config(raw)
    raw = yaml.safe_load(MINIMAL)
    raw["process"]["kind"] = "levy"
    with pytest.raises(ConfigError, match="process.kind"):
        parse_scenario_config(raw)


def test_config_query_forms():
    import yaml

    raw = yaml.safe_load(MINIMAL)
    raw["query"] = {"times": [0.0, 0.5, 1.0]}
    assert parse_scenario_config(raw).scenario.query_times == (0.0, 0.5, 1.0)
    raw["query"] = {"start": 0.0, "stop": 2.0, "count": 5}
    assert parse_scenario_config(raw).scenario.query_times == (0.0, 0.5, 1.0, 1.5, 2.0)
    raw["query"] = {"count": 11}
    q = parse_scenario_config(raw).scenario.query_times
    assert len(q) == 11
    assert q[0] == 0.0 and q[-1] == 4.0  # one unit past the last grid time
    raw["query"] = {"count": 1}
    with pytest.raises(ConfigError, match="query.count"):
        parse_scenario_config(raw)


def test_bundled_configs_load():
    names = bundled_config_names()
    assert "figure1" in names
    assert "figure2_brownian" in names
    assert "planning_sweep" in names
    for name in names:
        cfg = load_scenario_config(name)
        assert cfg.stem == name  # every bundled config names its stem
    with pytest.raises(ConfigError, match="bundled"):
        load_scenario_config("no_such_config")


def test_config_file_loading(tmp_path):
    path = tmp_path / "case.yaml"
    path.write_text(MINIMAL)
    cfg = load_scenario_config(str(path))
    assert cfg.stem == "case"
    bad = tmp_path / "broken.yaml"
    bad.write_text("process: [unclosed")
    with pytest.raises(ConfigError, match="YAML"):
        load_scenario_config(str(bad))


# --- CSV round-trip ---------------------------------------------------------


def test_format_cell_rules():
    assert format_cell(None) == ""
    assert format_cell(3) == "3"
    assert format_cell(1.0 / 3.0) == "0.333333333333"
    assert format_cell(1.5) == "1.5"
    assert format_cell("path") == "path"
    with pytest.raises(TypeError):
        format_cell(True)


def test_rows_round_trip():
    header = ["n", "t", "y", "note"]
    rows = [[1, 0.5, None, "a"], [2, 1.0 / 3.0, -1.25, ""]]
    buf = io.StringIO()
    write_rows(buf, header, rows)
    buf.seek(0)
    got_header, got_rows = read_rows(buf)
    assert got_header == header
    assert got_rows[0] == [1, 0.5, None, "a"]
    assert got_rows[1][1] == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert got_rows[1][2] == -1.25
    with pytest.raises(ValueError):
        read_rows(io.StringIO(""))


# --- SVG rendering ----------------------------------------------------------


def test_render_panels_produces_self_contained_svg():
    panel = StagePanel(
        title="prior",
        query_times=[0.0, 1.0, 2.0],
        mean=[0.0, 0.1, 0.2],
        lo=[-1.0, -0.9, -0.8],
        hi=[1.0, 1.1, 1.2],
        path_times=[0.0, 1.0, 2.0],
        path_values=[0.3, -0.2, 0.5],
        marker_times=[1.0],
        marker_values=[-0.2],
    )
    svg = render_panels([panel, panel])
    assert svg.startswith("<svg ")
    assert svg.rstrip().endswith("</svg>")
    assert "polygon" in svg and "polyline" in svg and "circle" in svg
    assert ">prior<" in svg
    # deterministic output
    assert svg == render_panels([panel, panel])
    with pytest.raises(ValueError):
        render_panels([])


# --- CLI end to end ---------------------------------------------------------


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_precisions_bundled_golden_rows(capsys):
    code, out, err = run_cli(capsys, "precisions", "figure2_brownian")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,t_n,R_n,p_star,posterior_var,payoff"
    assert lines[1] == "1,0,1,1,0.5,0.75"
    assert lines[2] == "2,1,1.5,1.33333333333,0.5,0.833333333333"
    assert lines[-1].startswith("10,9,1.5,1.33333333333")


def test_precisions_discounted_adds_a_column(capsys):
    code, out, err = run_cli(capsys, "precisions", "planning_sweep")
    assert code == 0
    header, rows = read_rows(io.StringIO(out))
    assert header == ["n", "t_n", "R_n", "p_star", "p_dagger", "posterior_var", "payoff"]
    p_star = np.array([r[3] for r in rows], dtype=float)
    p_dagger = np.array([r[4] for r in rows], dtype=float)
    assert np.all(p_dagger > p_star)


def test_precisions_to_files_with_seed_override(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code, out, err = run_cli(
        capsys,
        "precisions",
        "figure2_brownian",
        "figure2_ou",
        "--output",
        str(out_dir),
        "--jobs",
        "2",
        "--seed",
        "99",
    )
    assert code == 0
    assert (out_dir / "figure2_brownian_precisions.csv").exists()
    assert (out_dir / "figure2_ou_precisions.csv").exists()


def test_multiple_configs_require_output_dir(capsys):
    code, out, err = run_cli(capsys, "precisions", "figure2_brownian", "figure2_ou")
    assert code == 2
    assert "config error" in err


def test_simulate_csv_shape(capsys):
    code, out, err = run_cli(capsys, "simulate", "figure1")
    assert code == 0
    header, rows = read_rows(io.StringIO(out))
    assert header == ["series", "stage", "n", "t", "y", "lo", "hi", "precision"]
    series = {row[0] for row in rows}
    assert series == {"path", "signal", "posterior"}
    stages = {row[1] for row in rows if row[0] == "posterior"}
    assert stages == {0, 1, 2, 3}
    for row in rows:
        if row[0] == "posterior":
            assert row[5] <= row[4] <= row[6]  # lo <= mean <= hi


def test_simulate_rerun_is_byte_identical(tmp_path, capsys):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out_dir in (out_a, out_b):
        code, _, _ = run_cli(
            capsys, "simulate", "figure1", "--format", "both", "--output", str(out_dir)
        )
        assert code == 0
    assert (out_a / "figure1.csv").read_bytes() == (out_b / "figure1.csv").read_bytes()
    assert (out_a / "figure1.svg").read_bytes() == (out_b / "figure1.svg").read_bytes()
    svg = (out_a / "figure1.svg").read_text()
    assert svg.startswith("<svg ")
    # a different seed changes the CSV bytes
    out_c = tmp_path / "c"
    run_cli(capsys, "simulate", "figure1", "--output", str(out_c), "--seed", "1234")
    assert (out_a / "figure1.csv").read_bytes() != (out_c / "figure1.csv").read_bytes()


def test_simulate_svg_needs_output_dir(capsys):
    code, out, err = run_cli(capsys, "simulate", "figure1", "--format", "svg")
    assert code == 2
    assert "config error" in err


def test_verify_suites_pass(capsys):
    code, out, err = run_cli(capsys, "verify", "kernel-limits")
    assert code == 0
    assert "PASS" in out
    assert "2/2 checks passed" in out
    code, out, err = run_cli(capsys, "verify", "myopic-oracle")
    assert code == 0
    assert "1/1 checks passed" in out


def test_steady_reports_both_rules(capsys):
    code, out, err = run_cli(
        capsys, "steady", "--sigma", "1", "--dt", "1", "--c", "0.25", "--delta", "0.9"
    )
    assert code == 0
    assert out.startswith("one-step rule:")
    assert "planning rule:" in out
    assert "0.47602314562" in out  # V for sigma=1, c=1/4, delta=0.9
    assert "differences:" in out
    # without a discount only the one-step line appears
    code, out, err = run_cli(capsys, "steady", "--sigma", "1", "--dt", "1", "--c", "0.25")
    assert code == 0
    assert "planning rule:" not in out
    code, out, err = run_cli(capsys, "steady", "--sigma", "1", "--dt", "0", "--c", "0.25")
    assert code == 2


def test_unknown_config_key_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(MINIMAL + "\nextra_section: 1\n")
    code, out, err = run_cli(capsys, "precisions", str(path))
    assert code == 2
    assert "extra_section" in err


def test_numerical_failure_exits_3(tmp_path, capsys):
    # A frozen state observed twice at enormous precision makes the signal
    # covariance numerically singular while planning the fixed trajectory.
    path = tmp_path / "singular.yaml"
    path.write_text(
        """
process: {kind: brownian, sigma: 0.0, sigma0: 1.0}
grid: {times: [1.0, 2.0]}
cost: {c: 0.25}
strategy: fixed
fixed_precisions: [1.0e+16, 1.0e+16]
query: {times: [1.5]}
"""
    )
    code, out, err = run_cli(capsys, "simulate", str(path))
    assert code == 3
    assert "numerical error" in err
