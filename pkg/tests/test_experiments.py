from json import loads

import numpy as np
from pytest import fixture, mark, raises, warns

from crlab.config import parse
from crlab.dev import CrlabWarning
from crlab.exceptions import ConfigError
from crlab.experiments import REGISTRY, get_experiment, run_experiment, sweep
from crlab.pandas import read_report_csv


@fixture
def seeley_config():
    return parse({"experiment": "E6", "resolution": {"seeley_order": 4}})


def test_registry():
    assert sorted(REGISTRY, key=lambda k: int(k[1:])) == [f"E{k}" for k in range(1, 11)]
    assert get_experiment("E3").family.name == "BALL"

    with raises(ConfigError) as e:
        get_experiment("E0")
    assert e.value.path == "experiment"


def test_cauchy_oracle():
    config = parse({"experiment": "E1", "resolution": {"polar_nodes": 64, "grid": 6}})
    result = run_experiment(config, write=False)

    assert result.passed, result.summary()
    assert {row.metric for row in result.rows} == {
        "max_abs_err", "zero_form_max", "residual_conj", "holomorphy_conj"
    }


def test_support_inequality():
    config = parse({"experiment": "E4", "resolution": {"pairs": 400}, "t": [0, 1]})
    result = run_experiment(config, write=False)

    assert result.passed, result.summary()
    assert len(result.rows) == 4
    assert "non_psh_witness" in result.artifacts


@mark.parametrize(
    "experiment, resolution, t, metrics",
    [
        ("E2", {"quad_n": 24, "check_points": 4}, [0], {"residual_dzbar1", "holomorphy_z2_dzbar1", "cross_solver_dbar"}),
        ("E3", {"boundary_nodes": 64}, [0], {"disk_rational_err", "ball_poly_err"}),
        ("E5", {"grid": 9}, [0.5], {"min_real_hessian_eig", "normal_form_residue", "separation"}),
        ("E7", {"quad_n": 8}, [0.5, 0.6, 0.7], {"modulus_ratio_min", "linearity_err", "static_modulus"}),
        ("E8", {"polar_nodes": 256}, [0], {"cocycle_pole", "holomorphy_pole"}),
        ("E9", {"terms": 256}, [0], {"sup_error", "decreasing"}),
    ],
)
def test_experiment_passes(experiment, resolution, t, metrics):
    config = parse({"experiment": experiment, "resolution": resolution, "t": t})
    result = run_experiment(config, write=False)

    assert result.passed, result.summary()
    assert metrics <= {row.metric for row in result.rows}


def test_holder_trend():
    config = parse({"experiment": "E10", "resolution": {"quad_n": 8, "pairs": 6}})
    result = run_experiment(config, write=False)

    [row] = result.rows
    assert row.metric == "holder_growth"
    assert len(result.artifacts["holder_quotients@0"]) == 3
    assert np.isfinite(row.value)


def test_seeley_fidelity(seeley_config):
    result = run_experiment(seeley_config, write=False)

    assert result.passed, result.summary()
    assert result.artifacts["extension_norm"] >= 1.0


def test_outputs(seeley_config, tmp_path, monkeypatch):
    monkeypatch.setenv("CRLAB_OUTPUT_DIR", str(tmp_path))
    result = run_experiment(seeley_config)

    assert set(result.paths) == {"csv", "json", "summary"}
    assert len(read_report_csv(tmp_path / "e6.csv")) == len(result.rows)
    assert loads((tmp_path / "e6.json").read_text())["passed"] is True
    assert (tmp_path / "e6.txt").read_text().startswith("E6 Seeley extension fidelity")


def test_reproducible(seeley_config):
    first = run_experiment(seeley_config, write=False)
    second = run_experiment(seeley_config, write=False)
    assert [row.value for row in first.rows] == [row.value for row in second.rows]


def test_unused_knob():
    config = parse({"experiment": "E6", "resolution": {"seeley_order": 3, "quad_n": 4}})
    with warns(CrlabWarning):
        run_experiment(config, write=False)


def test_sweep(seeley_config):
    frame = sweep(seeley_config, "seeley_order", [3, 4], metric="moment_residual")

    assert list(frame.columns) == ["seeley_order", "metric", "value", "pass", "order"]
    assert frame["pass"].all()
    assert np.isnan(frame["order"].iloc[0])


def test_sweep_errors(seeley_config):
    with raises(ConfigError) as e:
        sweep(seeley_config, "seeley_order", [])
    assert e.value.path == "values"

    with raises(ConfigError) as e:
        sweep(seeley_config, "quad_n", [4])
    assert e.value.path == "resolution.quad_n"

    with raises(ConfigError) as e:
        sweep(seeley_config, "seeley_order", [3], metric="sup_error")
    assert e.value.path == "metric"
