from __future__ import annotations

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from specbound import __version__
from specbound.cli import main
from specbound.tables import ResultTable


def write(tmp_path, name, cfg):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


OHMIC = {"density": {"kind": "ohmic", "prefactor": 1.0, "cutoff": 1.0}, "beta": 1.0,
         "times": {"t_min": 0.0, "t_max": 10.0, "points": 100}}
LORENTZ = {"density": {"kind": "lorentzian", "terms": [{"p": 1.0, "omega": 1.0, "gamma": 0.5}]}, "beta": 2.0,
           "times": {"t_min": 0.0, "t_max": 10.0, "points": 25}, "N": 3, "t_target": 30.0}


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_eval_correlation_ohmic_fast_and_certified(tmp_path, capsys):
    cfg = write(tmp_path, "o.json", OHMIC)
    t0 = time.perf_counter()
    code, out, _ = run(["eval-correlation", "--config", cfg], capsys)
    assert time.perf_counter() - t0 < 1.0
    assert code == 0
    table = ResultTable.read_csv(out)
    assert table.columns == ["t", "re_xi", "im_xi", "tail_bound"]
    assert len(table.rows) == 100 and all(table.certified.values())


def test_lorentzian_closed_matches_forced_quadrature(tmp_path, capsys):
    cfg = write(tmp_path, "l.json", LORENTZ)
    _, closed, _ = run(["eval-correlation", "--config", cfg], capsys)
    _, quad, _ = run(["eval-correlation", "--config", cfg, "--method", "quadrature"], capsys)
    a, b = ResultTable.read_csv(closed), ResultTable.read_csv(quad)
    assert b.certified["re_xi"] is False
    for col in ("re_xi", "im_xi"):
        np.testing.assert_allclose(a.column(col), b.column(col), atol=1e-6)


def test_zero_density_gives_zero_table(tmp_path, capsys):
    cfg = write(tmp_path, "z.json", {"density": {"kind": "combination", "parts": []}})
    code, out, _ = run(["eval-correlation", "--config", cfg], capsys)
    assert code == 0
    t = ResultTable.read_csv(out)
    assert np.all(t.column("re_xi") == 0) and np.all(t.column("im_xi") == 0)


def test_threads_output_identical(tmp_path, capsys):
    cfg = write(tmp_path, "l.json", LORENTZ)
    _, serial, _ = run(["eval-correlation", "--config", cfg], capsys)
    _, threaded, _ = run(["eval-correlation", "--config", cfg, "--threads", "3"], capsys)
    assert serial == threaded


def test_determinism_of_written_files(tmp_path, capsys):
    cfg = write(tmp_path, "o.json", OHMIC)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["eval-correlation", "--config", cfg, "--out", str(a)]) == 0
    assert main(["eval-correlation", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_eval_density(tmp_path, capsys):
    cfg = write(tmp_path, "o.json", dict(OHMIC, omegas={"t_min": 0, "t_max": 5, "points": 6}))
    code, out, _ = run(["eval-density", "--config", cfg], capsys)
    t = ResultTable.read_csv(out)
    np.testing.assert_allclose(t.column("J"), np.pi * np.arange(6) * np.exp(-np.arange(6.0)), rtol=1e-15)


def test_bound_all_kinds(tmp_path, capsys):
    cfg = write(tmp_path, "b.json", {
        "density": {"kind": "ohmic", "prefactor": 1.001, "cutoff": 1.0},
        "reference": {"kind": "ohmic", "prefactor": 1.0, "cutoff": 1.0},
        "beta": 1.0, "times": {"t_min": 0, "t_max": 10, "points": 11}})
    code, out, _ = run(["bound", "--config", cfg], capsys)
    assert code == 0
    t = ResultTable.read_csv(out)
    assert t.columns == ["t", "general", "weak", "strong", "best"]
    np.testing.assert_array_equal(t.column("best"), t.column("general"))
    code, out, _ = run(["bound", "--config", cfg, "--kind", "weak"], capsys)
    assert ResultTable.read_csv(out).columns == ["t", "weak", "best"]


def test_bound_delta_refuses_strong(tmp_path, capsys):
    cfg = write(tmp_path, "d.json", {"variation": {"kind": "delta", "kappa": 0.01, "omega0": 1.0},
                                     "beta": 1.0, "times": {"t_min": 0, "t_max": 5, "points": 6}})
    code, out, err = run(["bound", "--config", cfg], capsys)
    assert code == 0
    assert "strong bound refused" in err and "not satisfied" in err
    t = ResultTable.read_csv(out)
    assert t.certified["strong"] is False and np.all(np.isnan(t.column("strong")))
    assert t.certified["weak"] is True


def test_bound_zero_variation(tmp_path, capsys):
    cfg = write(tmp_path, "z.json", {"density": {"kind": "ohmic", "prefactor": 1.0, "cutoff": 1.0},
                                     "reference": {"kind": "ohmic", "prefactor": 1.0, "cutoff": 1.0}})
    code, out, _ = run(["bound", "--config", cfg], capsys)
    t = ResultTable.read_csv(out)
    for col in ("general", "weak", "strong", "best"):
        assert np.all(t.column(col) == 0)


def test_heom_cert_and_cache(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SPECBOUND_CACHE_DIR", str(tmp_path / "cache"))
    cfg = write(tmp_path, "h.json", dict(LORENTZ, error_target=0.2))
    code, out, _ = run(["heom-cert", "--config", cfg], capsys)
    assert code == 0
    cert = json.loads(out)
    assert cert["gamma_numeric"] == pytest.approx(cert["gamma_analytic"], rel=1e-9)
    assert cert["min_N_numeric"] <= cert["min_N_analytic"]
    assert len(list((tmp_path / "cache").iterdir())) == 1
    code, again, _ = run(["heom-cert", "--config", cfg], capsys)
    assert json.loads(again) == cert


def test_heom_cert_requires_lorentzian(tmp_path, capsys):
    cfg = write(tmp_path, "o.json", OHMIC)
    code, _, err = run(["heom-cert", "--config", cfg], capsys)
    assert code == 2 and "lorentzian" in err


@pytest.mark.parametrize(
    "cfg,code",
    [({"nope": 1}, 2), ({"density": {"kind": "subohmic", "prefactor": 1, "cutoff": 1}, "beta": 1.0,
                         "method": "closed"}, 2)],
)
def test_error_exit_codes(tmp_path, capsys, cfg, code):
    path = write(tmp_path, "e.json", cfg)
    got, _, err = run(["eval-correlation", "--config", path], capsys)
    assert got == code and err.startswith("error:")


def test_budget_exit_code(tmp_path, capsys):
    # no order up to the search limit reaches this target: exit code 4
    cfg = write(tmp_path, "h.json", dict(LORENTZ, error_target=1e-300))
    code, _, err = run(["heom-cert", "--config", cfg], capsys)
    assert code == 4 and "1e-300" in err


def test_console_script_entry_point(tmp_path):
    cfg = write(tmp_path, "o.json", OHMIC)
    res = subprocess.run([sys.executable, "-m", "specbound.cli", "eval-density", "--config", cfg],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("# command")


def test_reproduce_table2_alias(tmp_path, capsys):
    out = tmp_path / "t2.csv"
    code, text, _ = run(["reproduce-table2", "--out", str(out)], capsys)
    assert code == 0
    assert text.count("PASS") == 3
    t = ResultTable.read_csv(out.read_text())
    np.testing.assert_allclose(t.column("analytic_pct"), [27.94, 62.39, 111.69], atol=0.05)
