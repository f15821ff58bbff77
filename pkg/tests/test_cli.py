import json
from fractions import Fraction

import pytest

from sharpmax.cli import decode, encode, main
from sharpmax.core import HighPrec
from sharpmax.operators import PolynomialFamily


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_uncentered_cyclic(capsys):
    code, doc = run(capsys, "constant", "--op", "u", "--kind", "weak", "--system", "cyclic", "--L", "5", "--p", "1")
    assert code == 0
    assert doc["value"] == {"num": 5, "den": 3}
    assert doc["search_value"] == doc["value"]


def test_one_sided_Z(capsys):
    code, doc = run(capsys, "constant", "--op", "os", "--kind", "weak", "--system", "Z", "--p", "1")
    assert code == 0
    assert doc["value"] == {"num": 1, "den": 1}
    assert doc["witness_ratio"] == {"num": 1, "den": 1}
    assert doc["witness"]["entries"]


def test_cp(capsys):
    code, doc = run(capsys, "constant", "--op", "cp", "--p", "2")
    assert code == 0
    assert doc["value"]["highprec"].startswith("2.414213562373095")
    assert doc["certificate"]["certified"]


def test_centered_cyclic(capsys):
    code, doc = run(capsys, "constant", "--op", "c", "--L", "3")
    assert code == 0
    assert doc["value"] == {"num": 6, "den": 5}
    assert doc["below_Z_reference"]
    assert doc["witness"]["L"] == 3
    assert len(doc["lp_duals"]) == len(doc["windows"]) + 3


def test_strong_inf(capsys):
    code, doc = run(capsys, "constant", "--op", "c", "--kind", "strong", "--system", "Z", "--p", "inf")
    assert code == 0 and doc["value"] == {"num": 1, "den": 1}


def test_no_method(capsys):
    assert main(["constant", "--op", "c", "--kind", "weak", "--p", "2", "--L", "3"]) == 2
    err = capsys.readouterr().err
    assert "no method" in err and "Available" in err


def test_usage_errors(capsys):
    assert main(["constant", "--op", "u", "--L", "0"]) == 2
    assert main(["constant", "--op", "u"]) == 2
    assert main(["constant", "--op", "nope"]) == 2
    assert main(["constant", "--op", "cp", "--p", "1"]) == 2
    assert main(["constant", "--op", "u", "--L", "3", "--p", "x/y"]) == 2


def test_budget_exceeded(capsys):
    assert main(["constant", "--op", "c", "--L", "3", "--budget", "10"]) == 3


def test_dichotomy(capsys):
    code, doc = run(capsys, "dichotomy", "--L", "3")
    assert code == 0 and doc["all_verdicts"]
    rows = doc["rows"]
    assert [decode(r["C_u"]) for r in rows] == [1, 1, Fraction(3, 2)]
    assert all(r["C_c_strict"] and r["C_u_strict"] and r["C_os_equal"] and r["C_inf_equal"] for r in rows)


def test_transfer_default(capsys):
    code, doc = run(capsys, "transfer")
    assert code == 0 and doc["all_hold"]
    assert [decode(v) for v in doc["scaling_factors"]] == [3, 2, Fraction(5, 3)]


def test_transfer_variation(capsys):
    code, doc = run(capsys, "transfer", "--functional", "variation", "--r", "2", "--K", "4", "--poly-power", "2")
    assert code == 0 and doc["all_hold"]


def test_transfer_corrupt(capsys):
    code, doc = run(capsys, "transfer", "--corrupt")
    assert code == 1
    assert doc["rows"][0]["mismatches"]


def test_transfer_family_file(capsys, tmp_path):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps(PolynomialFamily.power(2).to_json()))
    code, doc = run(capsys, "transfer", "--poly-file", str(fam), "--L", "3", "--K", "3")
    assert code == 0 and doc["family"]["polys"] == [[[[[2], 1]]]]


def test_verify_suite(capsys):
    code, doc = run(capsys, "verify-suite", "--list")
    assert code == 0 and len(doc["suites"]) == 11
    code, doc = run(capsys, "verify-suite", "--budget", "5")
    assert code == 0 and doc["all_pass"]
    assert main(["verify-suite", "--suite", "missing"]) == 2


def test_csv_sidecar(capsys, tmp_path):
    out = tmp_path / "u.csv"
    assert main(["constant", "--op", "u", "--L", "4", "--format", "csv", "--out", str(out)]) == 0
    head, row = out.read_text().splitlines()
    assert "value" in head.split(",") and "3/2" in row
    side = json.loads(out.with_suffix(".witnesses.json").read_text())
    assert side[0]["row"] == 0


def test_reports_are_deterministic(capsys):
    argv = ["constant", "--op", "u", "--kind", "strong", "--L", "3", "--p", "2"]
    assert main(argv) == 0
    a = capsys.readouterr().out
    assert main(argv) == 0
    b = capsys.readouterr().out
    assert a == b and "wall_time_ms" not in a
    assert main(argv + ["--timing"]) == 0
    assert "wall_time_ms" in capsys.readouterr().out


@pytest.mark.parametrize("x", [Fraction(7, 3), 5, True, None, [Fraction(1, 2), 2]])
def test_encode_roundtrip(x):
    assert decode(json.loads(json.dumps(encode(x)))) == x


def test_encode_highprec():
    doc = encode(HighPrec.of(Fraction(1, 3)))
    assert doc["bits"] == 256 and doc["highprec"].startswith("0.3333")
    assert decode(doc) == HighPrec.of(Fraction(1, 3))
