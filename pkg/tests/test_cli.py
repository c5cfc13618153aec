import csv
import io
import json
from fractions import Fraction as F

import pytest

from contexture.cli import main
from contexture.context_data import fit_fix_volume_polynomial
from contexture.scalar import SQRT2, parse_scalar


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_check_bell_center(capsys):
    r = run_json(capsys, "check", "--p", "1/4,1/4,1/4,1/4", "--which", "bell")
    assert r["verdict"] == "PASS"
    assert [parse_scalar(i["value"]["exact"]) for i in r["items"]] == [F(1, 2)] * 4


def test_check_general_bell_on_violating_system(capsys):
    r = run_json(capsys, "check", "--system", "eq5.json", "--which", "bell-general")
    assert r["verdict"] == "FAIL"
    assert min(parse_scalar(i["value"]["exact"]) for i in r["items"]) == -3


def test_check_elfp_report(capsys):
    r = run_json(capsys, "check", "--p", "tsirelson", "--eps", "1/2,1/2,1/2,1/2", "--which", "elfp")
    assert parse_scalar(r["value"]["exact"]) == 1 + SQRT2 / 2
    assert r["verdict"] == "FAIL"


def test_check_rational_root_stand_in(capsys):
    # 99/70 > sqrt2 loosens the bound, 141/100 < sqrt2 tightens it
    r = run_json(capsys, "check", "--p", "tsirelson", "--which", "cirelson", "--sqrt2", "99/70")
    assert r["verdict"] == "PASS"
    r = run_json(capsys, "check", "--p", "tsirelson", "--which", "cirelson", "--sqrt2", "141/100")
    assert r["verdict"] == "FAIL"
    exact = run_json(capsys, "check", "--p", "tsirelson", "--which", "cirelson")
    assert exact["verdict"] == "PASS"


@pytest.mark.parametrize("name, verdict", [("eq5.json", "infeasible"), ("eq6.json", "feasible"), ("uniform.json", "feasible")])
def test_jdc_command(capsys, name, verdict):
    r = run_json(capsys, "jdc", name)
    assert r["verdict"] == verdict


def test_jdc_writes_certificate_and_matrix(capsys, tmp_path):
    cert, mat = tmp_path / "cert.json", tmp_path / "m.json"
    run_json(capsys, "jdc", "eq5", "--certificate", str(cert), "--matrix", str(mat))
    assert json.loads(cert.read_text())["kind"] == "farkas_witness"
    m = json.loads(mat.read_text())
    assert (m["rows"], m["cols"], len(m["entries"])) == (16, 16, 64)


def test_jdc_from_file(capsys, tmp_path):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps({"tables": {k: ["1/4"] * 4 for k in ("11", "12", "21", "22")}}))
    assert run_json(capsys, "jdc", str(path))["verdict"] == "feasible"


def test_sets_fix_fit(capsys):
    r = run_json(capsys, "sets", "fix", "--p", "1/2,1/2,1/2,0", "--which", "fit")
    assert parse_scalar(r["volume"]["exact"]) == F(2, 3)
    assert {k: parse_scalar(v) for k, v in r["bounds"].items()} == {"maxS1e": 1, "maxS0e": F(1, 2)}


def test_sets_fix_force_is_empty(capsys):
    r = run_json(capsys, "sets", "fix", "--p", "1/4,1/4,1/4,1/4", "--which", "equi")
    assert r["empty"] is True


def test_sets_quant_fit(capsys):
    r = run_json(capsys, "sets", "quant", "--which", "fit")
    assert parse_scalar(r["volume"]["exact"]) == 2 * SQRT2 - F(13, 6)


def test_sets_class_force(capsys):
    r = run_json(capsys, "sets", "class", "--which", "force")
    assert parse_scalar(r["volume"]["exact"]) == 0


def test_fitfix_grid(capsys):
    code, out, _ = run(capsys, "fitfix-grid", "--n", "4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(r["volume_exact"] == r["polynomial_exact"] for r in rows)
    assert any(parse_scalar(r["x"]) == 1 for r in rows)
    for r in rows:
        assert parse_scalar(r["volume_exact"]) == fit_fix_volume_polynomial(parse_scalar(r["x"]), parse_scalar(r["y"]))


@pytest.mark.parametrize(
    "angles, chsh, bell, cirelson",
    [("0,1/2pi,1/4pi,-1/4pi", 2 * 2**0.5, "FAIL", "PASS"), ("0,0,0,0", 2.0, "PASS", "PASS")],
)
def test_quantum_command(capsys, angles, chsh, bell, cirelson):
    r = run_json(capsys, "quantum", "--angles", angles)
    assert abs(r["chsh"] - chsh) < 1e-12
    assert (r["bell"], r["cirelson"]) == (bell, cirelson)


def test_quantum_exact_pvector(capsys):
    r = run_json(capsys, "quantum", "--angles", "0,1/2pi,0,1/2pi")
    assert [parse_scalar(v) for v in r["p"].values()] == [F(1, 2), F(1, 4), F(1, 4), F(1, 2)]


@pytest.mark.parametrize(
    "argv, field",
    [
        (["check", "--p", "1/4,2,0,0", "--which", "bell"], "p12"),
        (["check", "--p", "1/4,1/4,1/4,1/4", "--eps", "0,0,0,x", "--which", "elfp"], "e22"),
        (["jdc", "missing.json"], "missing.json"),
        (["quantum", "--angles", "0,0,0"], "angles"),
    ],
)
def test_malformed_input(capsys, argv, field):
    code, _, err = run(capsys, *argv)
    assert code != 0 and field in err


def test_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["sets", "quant", "--which", "fit", "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sets_custom_constraint(capsys, tmp_path):
    from contexture.context_data import ConstraintKind

    path = tmp_path / "c.json"
    path.write_text(json.dumps(ConstraintKind.classical().hrep().to_json()))
    r = run_json(capsys, "sets", "custom", "--hrep", str(path), "--which", "fit")
    assert parse_scalar(r["volume"]["exact"]) == F(2, 3)


def test_sets_custom_needs_file(capsys):
    code, _, err = run(capsys, "sets", "custom", "--which", "fit")
    assert code == 2 and "custom" in err
