import csv
import json
import math

import numpy as np
import pytest

from oracles import J11
from renyifisher import verify as V
from renyifisher.cli import UsageError, parse_density, parse_sweep, run, to_json


def _run_json(tmp_path, argv, name="out.json"):
    out = tmp_path / name
    code = run([*argv, "--output", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_constants_closed_form(tmp_path):
    code, body = _run_json(tmp_path, ["constants", "--alpha", "2", "--dim", "1"])
    assert code == 0
    assert body["route"] == "closed_form_1d"
    assert body["value"] == pytest.approx(32 * math.pi ** 2 / 27, rel=1e-14)


def test_constants_sweep_csv(tmp_path):
    out = tmp_path / "c.csv"
    assert run(["constants", "--alpha", "0.5:2.5:5", "--dim", "1", "--output", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [float(r["alpha"]) for r in rows] == [0.5, 1.0, 1.5, 2.0, 2.5]
    assert rows[1]["route"] == "closed_form_1d"


def test_profile_csv_header(tmp_path):
    out = tmp_path / "u.csv"
    assert run(["profile", "--alpha", "2", "--dim", "2", "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# ")
    header = json.loads(lines[0][2:])
    assert header["T"] == pytest.approx(J11, rel=1e-9)
    assert lines[1] == "t,u,uprime"
    assert len(lines) > 10


def test_suite_example_passes(tmp_path):
    code, body = _run_json(tmp_path, ["suite", "--name", "all", "--alpha", "2", "--dim", "1",
                                      "--density", "family:cos_power(alpha=2,b=1,c=0)"])
    assert code == 0 and body["all_pass"]
    ids = {v["inequality_id"] for v in body["verdicts"]}
    assert {"isoperimetric", "cramer_rao_weighted", "cramer_rao_tsallis", "epi_gaussian"} <= ids
    assert all(v["anchor"] for v in body["verdicts"])


def test_json_is_deterministic(tmp_path):
    argv = ["verify", "--check", "isoperimetric", "--alpha", "0.5,2,3", "--density", "two_sided_exp()"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run([*argv, "--output", str(a), "--threads", "3"]) == 0
    assert run([*argv, "--output", str(b), "--threads", "1"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_float_format():
    text = to_json({"b": 0.1, "a": 1.0, "c": [math.inf, None, True]})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text
    assert json.loads(text)["c"][0] == math.inf


def test_failed_verdict_exit_code(tmp_path):
    code, body = _run_json(tmp_path, ["verify", "--check", "cm_bound", "--alpha", "1", "--h", "0.01",
                                      "--density", "gaussian(cov=1.0)", "--tol-fd", "1e-14"])
    assert code == 1
    assert body["all_pass"] is False
    assert V.TOL_FD_FIRST == 1e-3  # restored after the run


def test_region_error_exit_code(tmp_path, capsys):
    code = run(["verify", "--check", "cramer_rao_renyi", "--alpha", "0.5", "--dim", "3",
                "--density", "gaussian()", "--output", str(tmp_path / "x.json")])
    assert code == 2
    err = capsys.readouterr().err
    assert "valid region" in err and "0.6" in err


def test_usage_errors(capsys):
    assert run(["verify", "--check", "nonsense", "--density", "gaussian()"]) == 2
    assert run(["heatflow", "--density", "gaussian()"]) == 2
    assert run(["constants", "--alpha", "3:1:4"]) == 2
    assert run(["bogus"]) == 2
    capsys.readouterr()


def test_grid_csv_input(tmp_path):
    x = np.linspace(-8, 8, 8001)
    p = np.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    path = tmp_path / "g.csv"
    path.write_text("x,p\n" + "\n".join(f"{float(a)!r},{float(b)!r}" for a, b in zip(x, p)) + "\n")
    code, body = _run_json(tmp_path, ["verify", "--check", "isoperimetric", "--alpha", "1",
                                      "--density", f"grid:{path}"])
    assert code == 0
    assert body["verdicts"][0]["lhs"] == pytest.approx(2 * math.pi * math.e, rel=1e-6)


def test_grid_csv_rejects_bad_input(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,1\n0.1,1\n0.3,1\n0.4,1\n")
    with pytest.raises(UsageError):
        parse_density(f"grid:{path}")
    path.write_text("x,p\n0,1\n0.1,oops\n0.2,1\n")
    with pytest.raises(UsageError):
        parse_density(f"grid:{path}")


def test_heatflow_csv_columns(tmp_path):
    out = tmp_path / "t.csv"
    assert run(["heatflow", "--alpha", "2", "--density", "cos_power(alpha=2)", "--t-grid", "0.1:0.5:3",
                "--h", "0.005", "--output", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["t", "h", "N", "I", "dh_dt_fd", "residual"]
    assert len(rows) == 3
    assert max(abs(float(r["residual"])) for r in rows) < 1e-4


def test_functionals_and_density_language(tmp_path):
    code, rows = _run_json(tmp_path, ["functionals", "--alpha", "2", "--dim", "2",
                                      "--density", "gaussian(scale=2.0, shift=[1.0, 0.0])"])
    assert code == 0
    kinds = {r["kind"] for r in rows}
    assert {"I_alpha", "I_hat_alpha"} <= kinds
    d = parse_density("barenblatt(alpha=1.5)", dim=3)
    assert d.dim == 3


def test_parse_sweep():
    assert parse_sweep("2") == [2.0]
    assert parse_sweep("0.5, 1, 2") == [0.5, 1.0, 2.0]
    assert parse_sweep("1:2:3") == [1.0, 1.5, 2.0]
    for bad in ("", "1:2", "2,1", "a", "1:2:0", "nan"):
        with pytest.raises(UsageError):
            parse_sweep(bad)
