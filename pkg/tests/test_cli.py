import json
import subprocess
import sys

import numpy as np
import pytest

from sol_geodesics import cli
from sol_geodesics.flow import CSV_HEADER

from oracles import quad_E


def _csv(text):
    lines = text.strip("\n").split("\n")
    return lines[0].split(","), np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])


def test_geodesic_vertical(capsys):
    assert cli.main(["geodesic", "--a", "0", "--b", "0", "--t-max", "2", "--samples", "3"]) == 0
    head, rows = _csv(capsys.readouterr().out)
    assert ",".join(head) == CSV_HEADER
    assert list(rows[:, 3]) == [0.0, 1.0, 2.0]


def test_geodesic_line_both(capsys):
    argv = ["geodesic", "--a", "0.5", "--b", "0.5", "--t-max", "1", "--samples", "2",
            "--method", "both"]
    assert cli.main(argv) == 0
    head, rows = _csv(capsys.readouterr().out)
    assert head[-1] == "dev"
    assert np.all(rows[:, -1] <= 1e-12)


def test_geodesic_both_generic(tmp_path):
    out = tmp_path / "g.csv"
    meta = tmp_path / "g.json"
    argv = ["geodesic", "--a", "0.3", "--b", "0.3", "--pz-sign", "+", "--t-max", "5",
            "--method", "both", "-o", str(out), "--meta", str(meta)]
    assert cli.main(argv) == 0
    head, rows = _csv(out.read_text())
    assert rows.shape == (101, 11)
    assert np.max(rows[:, -1]) <= 1e-6
    _, ode_rows = _csv((tmp_path / "g.ode.csv").read_text())
    assert ode_rows.shape == (101, 10)
    record = json.loads(meta.read_text())
    assert record["case"] == "generic" and record["sigma1"] == pytest.approx(3.0)


def test_geodesic_negative_branch(capsys):
    argv = ["geodesic", "--a", "0.3", "--b", "0.3", "--pz-sign", "-", "--t-max", "1",
            "--samples", "2", "--method", "ode"]
    assert cli.main(argv) == 0
    _, rows = _csv(capsys.readouterr().out)
    assert rows[0, 6] == pytest.approx(-0.8)
    assert rows[1, 3] < 0


def test_geodesic_inadmissible(capsys):
    assert cli.main(["geodesic", "--a", "0.9", "--b", "0.3", "--t-max", "1"]) == 2
    assert "|a + b| <= 1" in capsys.readouterr().err


def test_usage_errors_exit_2():
    for argv in (["geodesic", "--a", "0"], ["sphere", "--r", "0.1", "--grid", "4by4"],
                 ["elliptic", "--fn", "tn", "--u", "1", "--k", "0"], ["bogus"]):
        with pytest.raises(SystemExit) as info:
            cli.main(argv)
        assert info.value.code == 2


def test_verify(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["verify", "--suite", "elliptic", "--n", "500", "--seed", "7",
                     "-o", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["passed"] and report["seed"] == 7
    assert report["checks"]["sn2_plus_cn2"]["worst"] <= 1e-12


def test_verify_failure_exit_code(monkeypatch, capsys):
    failing = {"suite": "oracle", "passed": False,
               "checks": {"closed_vs_ode": {"failures": [{"a": 0.1, "b": 0.2, "pz0": 0.7}]}}}
    monkeypatch.setattr(cli, "run_suite", lambda suite, n, seed: failing)
    assert cli.main(["verify", "--suite", "oracle"]) == 1
    assert json.loads(capsys.readouterr().out)["checks"]["closed_vs_ode"]["failures"]


def test_verify_is_deterministic(capsys):
    cli.main(["verify", "--suite", "symmetry", "--n", "3", "--seed", "2"])
    first = capsys.readouterr().out
    cli.main(["verify", "--suite", "symmetry", "--n", "3", "--seed", "2"])
    assert capsys.readouterr().out == first


def test_sphere_small_radius(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert cli.main(["sphere", "--r", "0.001", "--grid", "4x4", "-o", str(out)]) == 0
    head, rows = _csv(out.read_text())
    assert head == ["theta", "mu", "x", "y", "z"] and rows.shape == (16, 5)
    assert np.max(np.linalg.norm(rows[:, 2:], axis=1)) <= 0.001 + 1e-9
    assert "0 failed" in capsys.readouterr().err


def test_sphere_obj_default_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(["sphere", "--r", "0.25", "--format", "obj"]) == 0
    lines = (tmp_path / "sphere_r0.25.obj").read_text().splitlines()
    assert sum(ln.startswith("v ") for ln in lines) == 1024
    assert sum(ln.startswith("f ") for ln in lines) == 961


def test_sphere_bad_radius():
    assert cli.main(["sphere", "--r", "-1"]) == 2


def test_sphere_unwritable(tmp_path):
    assert cli.main(["sphere", "--r", "0.1", "--grid", "2x2",
                     "-o", str(tmp_path / "no" / "s.csv")]) == 2


@pytest.mark.parametrize("argv,expected", [
    (["--fn", "dn", "--u", "0", "--k", "0.5"], 1.0),
    (["--fn", "F", "--phi", "0.7", "--k", "0"], 0.7),
    (["--fn", "E", "--phi", "1.0471975512", "--k", "0.5"], quad_E(1.0471975512, 0.5)),
])
def test_elliptic(capsys, argv, expected):
    assert cli.main(["elliptic"] + argv) == 0
    text = capsys.readouterr().out.strip()
    assert float(text) == pytest.approx(expected, abs=1e-14)
    assert len(text.replace("-", "").replace(".", "").lstrip("0")) <= 15


def test_elliptic_errors():
    assert cli.main(["elliptic", "--fn", "sn", "--u", "1", "--k", "1.2"]) == 2
    assert cli.main(["elliptic", "--fn", "F", "--u", "1", "--k", "0.5"]) == 2


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "sol_geodesics", "elliptic", "--fn", "cn",
                           "--u", "0", "--k", "0.3"], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout == "1\n"
