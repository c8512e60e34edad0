import io
import json

import numpy as np
import pytest

from zcwell.cli import RunConfig, run
from zcwell.errors import ZcDomainError


def call(argv, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def tri_file(tmp_path):
    code, text, _ = call(["design", "--shape", "triangle", "--c", "0.5"])
    assert code == 0
    path = tmp_path / "t.json"
    path.write_text(text)
    return path


def test_design_triangle():
    code, text, _ = call(["design", "--shape", "triangle", "--c", "0.5"])
    assert code == 0
    assert '"strength": -2.0' in text
    data = json.loads(text)
    assert data["boundary"] == "dirichlet" and data["a"] == 1.0


def test_design_at_wall_is_domain_error():
    code, out, err = call(["design", "--shape", "triangle", "--c", "0.0"])
    assert code == 1 and out == ""
    assert "diverges" in err and "[DomainError]" in err


@pytest.mark.parametrize("shape,g", [("twin-symmetric", -1.5), ("twin-antisymmetric", -4.5)])
def test_design_twins(shape, g):
    code, text, _ = call(["design", "--shape", shape])
    assert [s["strength"] for s in json.loads(text)["spikes"]] == pytest.approx([g, g], rel=1e-15)


def test_design_round_trip(tmp_path, tri_file):
    out = tmp_path / "again.json"
    assert call(["design", "--input", str(tri_file), "--output", str(out)])[0] == 0
    assert out.read_text() == tri_file.read_text()


def test_cusp_at_node_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"a": 1, "hbar": 1, "mass": 1, "boundary": "dirichlet",
                               "knots": [[0, 0], [0.3, 1], [0.5, 0], [0.8, -1], [1, 0]]}))
    code, _, err = call(["design", "--input", str(bad)])
    assert code == 1 and "[CuspAtNode]" in err


def test_periodic_infeasible_exit_code(tmp_path):
    bad = tmp_path / "p.json"
    bad.write_text(json.dumps({"a": 1, "hbar": 1, "mass": 1, "boundary": "periodic",
                               "knots": [[0, 0], [0.5, 1], [1, 0]]}))
    code, _, err = call(["design", "--input", str(bad)])
    assert code == 1 and "[PeriodicInfeasible]" in err


def test_malformed_file(tmp_path):
    bad = tmp_path / "m.json"
    bad.write_text("{not json")
    assert call(["design", "--input", str(bad)])[0] == 1
    assert call(["design", "--input", str(tmp_path / "missing.json")])[0] == 1


def test_analyze_writes_two_csvs(tmp_path, tri_file):
    stem = tmp_path / "xp"
    code, out, _ = call(["analyze", "--input", str(tri_file), "--pgrid", "-40:40:801",
                         "--out-csv", str(stem)])
    assert code == 0
    assert "parseval" in out
    xcsv = (tmp_path / "xp_x.csv").read_text()
    pcsv = (tmp_path / "xp_p.csv").read_text()
    assert xcsv.startswith("x,psi\n") and pcsv.startswith("p,phi2\n")
    assert "\r" not in xcsv + pcsv
    rows = np.loadtxt(tmp_path / "xp_p.csv", delimiter=",", skiprows=1)
    assert rows.shape == (801, 2)
    assert rows[400, 1] == pytest.approx(3 / (8 * np.pi), rel=1e-12)


def test_analyze_is_deterministic(tmp_path, tri_file):
    texts = []
    for tag in ("a", "b"):
        stem = tmp_path / tag
        call(["analyze", "--input", str(tri_file), "--pgrid", "-5:5:11", "--out-csv", str(stem)])
        texts.append((tmp_path / f"{tag}_p.csv").read_bytes())
    assert texts[0] == texts[1]


def test_bad_pgrid(tri_file):
    assert call(["analyze", "--input", str(tri_file), "--pgrid", "1:2"])[0] == 1


def test_susy_output(tmp_path):
    code, text, _ = call(["design", "--shape", "twin-symmetric"])
    src = tmp_path / "s.json"
    src.write_text(text)
    code, text, _ = call(["susy", "--input", str(src)])
    data = json.loads(text)
    assert [g for _, g in data["spikes"]] == pytest.approx([1.5, 1.5])
    assert data["smooth"][1] == {"interval": [1 / 3, 2 / 3], "zero": True}
    assert data["smooth"][0]["pole"] == 0.0 and data["smooth"][0]["K"] == 1.0


def test_susy_node_error(tmp_path):
    _, text, _ = call(["design", "--shape", "twin-antisymmetric"])
    src = tmp_path / "a.json"
    src.write_text(text)
    code, _, err = call(["susy", "--input", str(src)])
    assert code == 1 and "[NodeInInterior]" in err


def test_asym_levels(tmp_path):
    path = tmp_path / "levels.csv"
    code, _, _ = call(["asym", "--a", "1", "--b", "1", "--v0", "2.5", "--levels", "8",
                       "--out-csv", str(path)])
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "n,E,regime" and len(lines) == 9
    assert lines[1].endswith("BelowStep")


def test_asym_tune(tmp_path):
    path = tmp_path / "w.csv"
    code, out, _ = call(["asym", "tune", "--a", "1", "--b", "1", "--branch", "0", "--out-csv", str(path)])
    assert code == 0
    assert out.startswith("V0 = 2.05792918")
    assert path.read_text().startswith("x,psi\n0.0,0.0\n")


def test_asym_without_height():
    assert call(["asym", "--a", "1", "--b", "1"])[0] == 1


def test_verify_report(tmp_path, tri_file):
    rep = tmp_path / "r.json"
    code, out, _ = call(["verify", "--input", str(tri_file), "--ladder", "99,199,399",
                         "--k", "3", "--out", str(rep)])
    assert code == 0
    data = json.loads(rep.read_text())
    assert {"ladder", "eigenvalues", "zero_mode", "overlaps", "convergence_orders",
            "passed"} <= set(data)
    assert data["ladder"] == [99, 199, 399]


def test_verify_off_grid(tri_file):
    code, _, err = call(["verify", "--input", str(tri_file), "--ladder", "100,200"])
    assert code == 1 and "smallest compatible n_interior" in err


def test_units_override(monkeypatch):
    monkeypatch.setenv("ZCWELL_UNITS", "2,0.5,4")
    code, text, _ = call(["design", "--shape", "triangle", "--c", "2"])
    data = json.loads(text)
    assert data["a"] == 4.0 and data["hbar"] == 2.0 and data["mass"] == 0.5
    # -(hbar^2/2m) a / (c (a - c)) = -4 * 4 / 4
    assert data["spikes"][0]["strength"] == pytest.approx(-4.0)
    monkeypatch.setenv("ZCWELL_UNITS", "1,1")
    assert call(["design", "--shape", "triangle"])[0] == 1


def test_run_config_checks(tmp_path):
    with pytest.raises(ZcDomainError):
        RunConfig("design", [str(tmp_path / "a")], [str(tmp_path / "a")])
    with pytest.raises(ZcDomainError):
        RunConfig("analyze", tolerances={"tail_tol": 0.0})


def test_output_may_not_overwrite_input(tri_file):
    assert call(["design", "--input", str(tri_file), "--output", str(tri_file)])[0] == 1
