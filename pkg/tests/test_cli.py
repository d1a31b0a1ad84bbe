"""Model files, JSON reports and the tpw command line."""

import json

import numpy as np
import pytest

from tpw.cli.main import main
from tpw.cli.modelfile import ModelFileError, load_model, model_to_text, parse_model_text
from tpw.cli.report import SCHEMA, without_timing
from tpw.pathspace import Grid, PathTangent, solve_base_path
from tpw.pathspace.sampling import random_constraint_tangent, random_on_shell_path
from tpw.tensorcalc.fixtures import FIXTURE_NAMES, fixture

SU2 = """\
# su(2)* as a 3-dimensional Poisson manifold
dim 3
pi 1 2 : x3
pi 1 3 : -x2
pi 2 3 : x1
point 0.1 0.2 0.3
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# model files


def test_parse_model_file():
    m = parse_model_text(SU2, "su2")
    assert m.n == 3 and m.name == "su2"
    assert not m.phi_exprs
    assert m.points == ((0.1, 0.2, 0.3),)


def test_empty_phi_is_ordinary_poisson(capsys):
    m = parse_model_text(SU2, "su2")
    assert not m.phi_exprs
    ref = fixture("M2")
    assert set(m.pi_exprs) == set(ref.pi_exprs)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_model_text_round_trip(name):
    m = fixture(name)
    back = parse_model_text(model_to_text(m), m.name)
    assert model_to_text(back) == model_to_text(m)
    assert back.calibration == m.calibration


@pytest.mark.parametrize(
    "text, line, column, message",
    [
        ("pi 1 2 : x1\n", 1, 1, "before dim"),
        ("dim 2\ndim 2\n", 2, 1, "twice"),
        ("dim two\n", 1, 5, "integer"),
        ("dim 2\npi 1 2 x1\n", 2, 10, "' : <expr>'"),
        ("dim 2\npi 2 1 : x1\n", 2, 4, "increasing"),
        ("dim 2\npi 1 3 : x1\n", 2, 4, "within"),
        ("dim 2\npi 1 2 : x1 +\n", 2, None, ""),
        ("dim 2\nfoo 1\n", 2, 1, "unknown directive"),
        ("dim 2\npoint 1\n", 2, 7, "2 coordinates"),
        ("dim 2\ncalibration c_xx 1\n", 2, 1, "calibration"),
        ("# nothing\n", 1, 1, "missing 'dim'"),
    ],
)
def test_model_file_errors(text, line, column, message):
    with pytest.raises(ModelFileError) as info:
        parse_model_text(text, "bad")
    assert info.value.line == line
    if column is not None:
        assert info.value.column == column
    assert message in str(info.value)
    assert str(info.value).startswith(f"bad:{line}:")


def test_non_closed_phi_is_a_load_error_unless_allowed():
    text = "dim 4\nphi 1 2 3 : x4\n"
    with pytest.raises(ModelFileError, match="closed"):
        parse_model_text(text, "open")
    assert parse_model_text(text, "open", check_closed=False).phi_exprs


def test_calibration_override():
    m = parse_model_text(SU2 + "calibration c_jac -2\n", "su2")
    assert m.calibration.c_jac == -2


def test_load_model_fixture_or_file(tmp_path):
    assert load_model("m2").name == "M2"
    f = tmp_path / "su2.model"
    f.write_text(SU2)
    assert load_model(str(f)).name == "su2"
    with pytest.raises(FileNotFoundError):
        load_model(str(tmp_path / "missing.model"))


# verify


def test_verify_m2_passes(capsys):
    code, out, err = run(capsys, "verify", "M2")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert report["schema"] == SCHEMA and report["command"] == "verify"
    assert report["parameters"]["mode"] == "symbolic"
    names = [c["name"] for c in report["checks"]]
    assert "twisted_jacobi" in names and "delta_suite" in names
    assert all(line.startswith("PASS") for line in err.strip().splitlines())


def test_verify_m4_fails_twisted_jacobi(capsys):
    code, out, err = run(capsys, "verify", "M4")
    report = json.loads(out)
    assert code == 1 and not report["passed"]
    failed = {c["name"] for c in report["checks"] if not c["passed"]}
    assert "twisted_jacobi" in failed and "bracket_consistency" not in failed
    assert "FAIL  twisted_jacobi" in err


def test_verify_reports_non_closed_phi(tmp_path, capsys):
    f = tmp_path / "open.model"
    f.write_text("dim 4\npi 1 2 : 1\nphi 1 2 3 : x4\n")
    code, out, _ = run(capsys, "verify", str(f))
    report = json.loads(out)
    assert code == 1
    closed = next(c for c in report["checks"] if c["name"] == "closedness")
    assert not closed["passed"]


def test_verify_symbolic_downgrades_for_transcendental_models(tmp_path, capsys):
    f = tmp_path / "trig.model"
    f.write_text("dim 2\npi 1 2 : sin(x1)\n")
    code, out, err = run(capsys, "verify", str(f), "--symbolic", "--points", "3")
    report = json.loads(out)
    assert code == 0
    assert report["parameters"]["mode"] == "numeric" and report["parameters"]["points"] == 3
    assert report["warnings"] and "numerically" in report["warnings"][0]
    assert "tpw: warning:" in err


def test_verify_numeric_mode(capsys):
    code, out, _ = run(capsys, "verify", "M3", "--numeric", "--points", "2")
    assert code == 0 and json.loads(out)["parameters"]["mode"] == "numeric"


# path, gauge, omega


def test_path_command(tmp_path, capsys):
    out_file = tmp_path / "p.json"
    code, out, _ = run(capsys, "path", "M1", "--x0", "0,0", "--eta", "1,2*t", "--grid", "50", "--out", str(out_file))
    report = json.loads(out)
    assert code == 0 and report["passed"]
    # M1 has pi^12 = 1, so X' = (-eta_2, eta_1); the target is X(0), the source X(1)
    assert report["results"]["target"] == [0.0, 0.0]
    assert report["results"]["source"] == pytest.approx([-1.0, 1.0], abs=1e-12)
    data = json.loads(out_file.read_text())
    assert len(data["X"]) == 51


def test_path_inline_and_default_eta(capsys):
    code, out, _ = run(capsys, "path", "M2", "--x0", "0.1,0.2,0.3", "--grid", "20")
    report = json.loads(out)
    assert code == 0
    assert report["results"]["target"] == report["results"]["source"]
    assert "path" in report["results"]


def test_gauge_command(tmp_path, capsys):
    m = fixture("M2")
    p, _, _ = random_on_shell_path(m, np.random.default_rng(3), Grid(100))
    pf = tmp_path / "p.json"
    pf.write_text(json.dumps(p.to_json()))
    flowed = tmp_path / "q.json"
    B = "t*(1-t)*x2,t*(1-t)*0.3,t*(1-t)*x1"
    code, out, err = run(capsys, "gauge", "M2", str(pf), "--B", B, "--s", "0.5", "--steps", "10", "--out", str(flowed))
    report = json.loads(out)
    assert code == 0, err
    names = [c["name"] for c in report["checks"]]
    assert names == ["endpoints", "constraint_growth"]
    q = json.loads(flowed.read_text())
    assert q["X"][0] == p.to_json()["X"][0] and q["X"][-1] == p.to_json()["X"][-1]


def test_gauge_rejects_generator_not_vanishing_at_ends(tmp_path, capsys):
    p = solve_base_path(fixture("M1"), [0, 0], [1, 0], Grid(20))
    pf = tmp_path / "p.json"
    pf.write_text(json.dumps(p.to_json()))
    code, _, err = run(capsys, "gauge", "M1", str(pf), "--B", "x1,1")
    assert code == 2 and "--B" in err


def test_omega_command(tmp_path, capsys):
    m = fixture("M3")
    grid = Grid(100)
    p, x0, eta = random_on_shell_path(m, np.random.default_rng(4), grid)
    rng = np.random.default_rng(5)
    u, v = (random_constraint_tangent(m, rng, x0, eta, grid) for _ in range(2))
    files = {}
    for key, obj in (("p", p.to_json()), ("u", u.to_json(grid)), ("v", v.to_json(grid))):
        files[key] = tmp_path / f"{key}.json"
        files[key].write_text(json.dumps(obj))
    values = {}
    for which in ("0", "1", "total"):
        code, out, _ = run(capsys, "omega", "M3", str(files["p"]), str(files["u"]), str(files["v"]), "--which", which)
        assert code == 0
        values[which] = json.loads(out)["results"]["value"]
    assert values["total"] == pytest.approx(values["0"] + values["1"], rel=1e-12, abs=1e-15)


def test_omega_rejects_mismatched_tangent(tmp_path, capsys):
    p = solve_base_path(fixture("M1"), [0, 0], [1, 0], Grid(20))
    q = solve_base_path(fixture("M1"), [0, 0], [1, 0], Grid(10))
    pf, uf = tmp_path / "p.json", tmp_path / "u.json"
    pf.write_text(json.dumps(p.to_json()))
    uf.write_text(json.dumps(PathTangent.zero(q).to_json(q.grid)))
    code, _, err = run(capsys, "omega", "M1", str(pf), str(uf), str(uf))
    assert code == 2 and "shape" in err


# suite and convergence


def test_suite_is_deterministic_and_seeded(monkeypatch, capsys):
    args = ("suite", "M1", "--check", "constraint_momentum", "--check", "base_pairing", "--seed", "7")
    code, first, err = run(capsys, *args)
    assert code == 0
    assert len(err.strip().splitlines()) == 2
    _, second, _ = run(capsys, *args)
    assert without_timing(json.loads(first)) == without_timing(json.loads(second))
    assert json.loads(first)["parameters"]["seed"] == 7
    monkeypatch.setenv("TPW_SEED", "11")
    _, third, _ = run(capsys, *args)
    assert json.loads(third)["parameters"]["seed"] == 11


def test_suite_report_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "suite", "M2", "--check", "omega1_identity", "--report", str(target))
    assert code == 0 and out == ""
    report = json.loads(target.read_text())
    assert set(report) >= {"schema", "command", "model", "calibration", "parameters", "checks", "passed", "warnings", "timing"}
    assert report["model"]["name"] == "M2"


@pytest.mark.parametrize("study, order", [("path", 3.5), ("momentum", 1.8), ("omega1", 1.8)])
def test_convergence_command(study, order, capsys):
    model = "M3" if study == "omega1" else "M2"
    code, out, _ = run(capsys, "convergence", model, study)
    report = json.loads(out)
    assert code == 0
    slope = report["results"]["slope"]
    assert slope == "inf" or slope >= order
    assert [row["N"] for row in report["results"]["rows"]] == report["parameters"]["grids"]


# input errors


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "M9"),
        ("suite", "M1", "--check", "nonsense"),
        ("path", "M1", "--x0", "0"),
        ("path", "M1", "--x0", "0,0", "--eta", "1,("),
        ("path", "M1", "--x0", "0,0", "--eta", "x1,0"),
        ("convergence", "M1", "path", "--grids", "10,25,50"),
        ("omega", "M1", "missing.json", "u.json", "v.json"),
    ],
)
def test_unusable_input_exits_with_2(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith("tpw: error:")


def test_bad_model_file_reports_location(tmp_path, capsys):
    f = tmp_path / "bad.model"
    f.write_text("dim 2\npi 1 2 : x1 *\n")
    code, _, err = run(capsys, "verify", str(f))
    assert code == 2 and "bad:2:" in err


def test_path_into_pole_exits_with_2(capsys):
    code, _, err = run(capsys, "path", "M3", "--x0=-0.5,0,0,0", "--eta", "0,5,0,0")
    assert code == 2 and "pole" in err
