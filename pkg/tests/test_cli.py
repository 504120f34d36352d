import csv
import io
import json
import math
import subprocess
import sys

import pytest

from snmsurf import __version__
from snmsurf.cli import main
from snmsurf.profiles import EXAMPLES


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_curvature_paraboloid(capsys):
    code, out, _ = run(capsys, "curvature", "--type", "I", "--f", "x^2", "--g", "y^2",
                       "--grid", "0,0,1,1,5,5")
    assert code == 0
    assert out.startswith(f"# snmsurf {__version__} | command: snmsurf curvature")
    r = rows(out)
    assert len(r) == 25
    assert (r[0]["u"], r[0]["v"]) == ("0.0", "0.0") and float(r[0]["K_closed"]) == 2.0


def test_curvature_type_two_plane(capsys):
    code, out, _ = run(capsys, "curvature", "--type", "II", "--f", "0", "--g", "0")
    assert code == 0
    assert {float(r["K_closed"]) for r in rows(out)} == {0.5}


def test_curvature_verify_columns(capsys):
    code, out, _ = run(capsys, "curvature", "--type", "I", "--f", "sin(x)", "--g", "y^3",
                       "--grid=-0.5,-0.5,0.5,0.5,3,3", "--verify")
    assert code == 0
    r = rows(out)
    assert set(r[0]) == {"u", "v", "K_closed", "K_gauss", "K_oracle", "flag"}
    for row in r:
        assert abs(float(row["K_closed"]) - float(row["K_oracle"])) <= 1e-6


def test_curvature_flags_bad_points(capsys):
    code, out, _ = run(capsys, "curvature", "--type", "I", "--f", "log(x)", "--g", "0",
                       "--grid=-1,0,1,0,3,1")
    assert code == 0
    flags = [r["flag"] for r in rows(out)]
    assert flags[0].startswith("domain") and flags[2] == "ok"


def test_malformed_expression(capsys):
    code, _, err = run(capsys, "curvature", "--type", "I", "--f", "x^", "--g", "y")
    assert code == 2
    assert "offset 2" in err


@pytest.mark.parametrize("argv", [
    ["curvature", "--type", "I", "--f", "x", "--g", "y", "--grid", "0,0,1"],
    ["curvature", "--type", "III", "--f", "x", "--g", "y"],
    ["profile", "--family", "{not json"],
    ["examples", "--name", "nope"],
    ["verify", "--suite", "k1", "--format", "csv"],
])
def test_parse_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_profile_first_example(capsys):
    code, out, _ = run(capsys, "profile", "--family",
                       '{"tag": "T51", "a": 0, "K0": 0.5, "c": 2}', "--samples", "51")
    assert code == 0
    assert "maximal_domain: (-inf, 0.0)" in out
    r = rows(out)
    fn = EXAMPLES["int-cyl-01"][1]
    diffs = [float(x["x_of_t"]) - fn(float(x["t"])) for x in r]
    assert max(diffs) - min(diffs) <= 1e-8


def test_profile_constraint_violation(capsys):
    code, _, err = run(capsys, "profile", "--family", '{"tag": "T53gen", "a": 0, "K0": 2, "c": 1}')
    assert code == 3
    assert "K0" in err


def test_profile_grim_reaper(capsys):
    code, out, _ = run(capsys, "profile", "--family",
                       '{"tag": "GrimReaper", "kind": "T51", "a": 0, "c": 0, "d": 0}',
                       "--samples", "11")
    assert code == 0
    for r in rows(out):
        assert float(r["profile"]) == pytest.approx(math.log(math.cos(float(r["t"]))), abs=1e-15)


def test_profile_svg(capsys):
    code, out, _ = run(capsys, "profile", "--family", '{"tag": "T52a0", "K0": -1, "c": -2}',
                       "--format", "svg")
    assert code == 0
    assert out.startswith("<svg") and "<polyline" in out


def test_examples_command(capsys):
    code, out, _ = run(capsys, "examples", "--samples", "21")
    assert code == 0
    r = rows(out)
    assert {x["example"] for x in r} == set(EXAMPLES)
    for name in EXAMPLES:
        sub = [float(x["x_closed"]) - float(x["x_quadrature"]) for x in r if x["example"] == name]
        assert max(map(abs, sub)) <= 1e-8


def test_verify_oracle_small(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "oracle", "--n", "3", "--seed", "7")
    assert code == 0
    rep = json.loads(out)
    assert rep["suite"] == "oracle" and rep["failures"] == []
    assert rep["header"].endswith("seed: 7")


def test_verify_classification(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "classification", "--n", "20")
    assert code == 0 and json.loads(out)["failures"] == []


def test_verify_k1_reports_the_identity_that_holds(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "k1", "--n", "50")
    rep = json.loads(out)
    assert rep["max_errors"]["A0_minus_A1"] <= 1e-12
    assert rep["max_errors"]["A1_plus_A2_minus_3"] <= 1e-12
    # A1 + A2 - A3 = 3 - A3 is not 3 in general, so the report fails
    assert code == 1 and len(rep["failures"]) == 50


def test_verify_cylinders_by_identity(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cylinders", "--n", "4", "--seed", "1",
                       "--identity", "printed")
    assert code == 0, json.loads(out)["failures"][:1]
    code, out, _ = run(capsys, "verify", "--suite", "cylinders", "--n", "4", "--seed", "1")
    per_tag = json.loads(out)["details"]["per_tag"]
    assert code == 1
    for tag in ("Plane", "T51", "T52corr", "T53corr"):
        assert per_tag[tag]["failed_draws"] == 0
    for tag in ("T52a0", "T53gen"):
        assert per_tag[tag]["failed_draws"] == 4


def test_determinism(tmp_path):
    # the header records the command line, so both runs write to the same path
    outs = []
    path = tmp_path / "out.json"
    for _ in range(2):
        code = main(["verify", "--suite", "cylinders", "--n", "2", "--seed", "5",
                     "--out", str(path)])
        assert code == 1
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    argv = ["profile", "--family", '{"tag": "T53K1", "a": 1, "c": 2}', "--out", str(path)]
    assert main(argv) == 0
    first = path.read_bytes()
    assert main(argv) == 0
    assert path.read_bytes() == first


def test_json_output_has_header(capsys):
    code, out, _ = run(capsys, "curvature", "--type", "I", "--f", "x", "--g", "y",
                       "--grid", "0,0,1,1,2,2", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["header"].startswith("snmsurf ") and len(rep["rows"]) == 4


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "snmsurf.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
