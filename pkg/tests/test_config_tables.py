from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specbound.config import (
    RunConfig,
    TimeGrid,
    density_from_dict,
    density_to_dict,
    load_config,
    parse_beta,
)
from specbound.densities import canonical_terms
from specbound.errors import ConfigError
from specbound.tables import ResultTable

pos = st.floats(0.01, 100.0, allow_nan=False)

leaf = st.one_of(
    st.builds(lambda a, w: {"kind": "ohmic", "prefactor": a, "cutoff": w}, pos, pos),
    st.builds(lambda n, a, w: {"kind": "superohmic", "exponent": n, "prefactor": a, "cutoff": w},
              st.integers(2, 5), pos, pos),
    st.builds(lambda a, w: {"kind": "subohmic", "prefactor": a, "cutoff": w}, pos, pos),
    st.builds(lambda ts: {"kind": "lorentzian", "terms": [{"p": p, "omega": o, "gamma": g} for p, o, g in ts]},
              st.lists(st.tuples(st.floats(-50, 50), pos, pos), min_size=1, max_size=3)),
    st.builds(lambda k, w: {"kind": "delta", "kappa": k, "omega0": w}, st.floats(-5, 5), pos),
)
densities = st.recursive(
    leaf,
    lambda inner: st.builds(
        lambda parts: {"kind": "combination", "parts": [{"coeff": c, "density": d} for c, d in parts]},
        st.lists(st.tuples(st.floats(-5, 5), inner), min_size=1, max_size=3),
    ),
    max_leaves=5,
)

configs = st.builds(
    lambda d, beta, tol, kind, method, N, grid: {
        "density": d, "beta": beta, "tol": tol, "kind": kind, "method": method, "N": N,
        "times": {"t_min": grid[0], "t_max": grid[0] + grid[1], "points": grid[2], "spacing": "linear"},
    },
    densities,
    st.one_of(st.just("inf"), pos),
    st.floats(1e-14, 1e-3),
    st.sampled_from(["all", "general", "weak", "strong"]),
    st.sampled_from(["auto", "closed", "quadrature"]),
    st.integers(0, 200),
    st.tuples(st.floats(0, 10), st.floats(0.1, 100), st.integers(2, 500)),
)


@given(densities)
def test_density_round_trip(d):
    J = density_from_dict(d)
    again = density_from_dict(density_to_dict(J))
    assert J == again
    assert canonical_terms(J) == canonical_terms(again)


@given(configs)
def test_run_config_round_trip(d):
    cfg = RunConfig.from_dict(d)
    again = RunConfig.from_dict(json.loads(cfg.dumps()))
    assert again == cfg
    assert again.digest() == cfg.digest()


def test_load_config_file(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"density": {"kind": "ohmic", "prefactor": 1, "cutoff": 1}, "beta": "inf"}))
    cfg = load_config(p)
    assert math.isinf(cfg.beta)
    assert cfg.bath_density().cutoff == 1


@pytest.mark.parametrize(
    "bad",
    [
        {"unknown": 1},
        {"beta": -1},
        {"beta": "warm"},
        {"tol": 0},
        {"method": "magic"},
        {"kind": "best"},
        {"density": {"kind": "fancy"}},
        {"density": {"kind": "ohmic", "prefactor": 1}},
        {"density": {"kind": "ohmic", "prefactor": -1, "cutoff": 1}},
        {"times": {"t_min": 5, "t_max": 1}},
        {"times": {"t_min": 0, "t_max": 1, "points": 10, "spacing": "log"}},
        {"horizon": 0},
    ],
)
def test_config_errors(bad):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(bad)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "none.json")
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)


def test_variation_from_reference():
    cfg = RunConfig.from_dict({
        "density": {"kind": "ohmic", "prefactor": 2, "cutoff": 1},
        "reference": {"kind": "ohmic", "prefactor": 1, "cutoff": 1},
    })
    assert canonical_terms(cfg.variation_density()) == {("power", 1.0, 1.0): 1.0}
    with pytest.raises(ConfigError):
        RunConfig().variation_density()


def test_parse_beta():
    assert parse_beta("Inf") == math.inf
    assert parse_beta(None) == math.inf
    assert parse_beta("2.5") == 2.5


def test_time_grid_values():
    np.testing.assert_allclose(TimeGrid(1.0, 100.0, 3, "log").values(), [1.0, 10.0, 100.0])


def test_table_csv_round_trip():
    t = ResultTable.from_columns({"t": np.array([0.0, 0.1]), "v": np.array([1 / 3, 2e-300])},
                                 {"t": True, "v": False}, {"note": "x"})
    text = t.to_csv()
    assert "# certified: t=yes,v=no" in text
    assert "0.33333333333333331" in text  # 17 significant digits
    back = ResultTable.read_csv(text)
    assert back.columns == t.columns and back.certified == t.certified
    np.testing.assert_array_equal(back.column("v"), t.column("v"))
    assert back.metadata == t.metadata


def test_table_requires_certified_flags():
    with pytest.raises(ValueError):
        ResultTable(["a", "b"], [[1, 2]], {"a": True})
    with pytest.raises(ValueError):
        ResultTable(["a"], [[1, 2]], {"a": True})
