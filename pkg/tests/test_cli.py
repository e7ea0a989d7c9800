from __future__ import annotations

import csv
import json

import pytest

from slicequat.cli import dumps, main, parse_quaternion
from slicequat.quat_core import Quaternion


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_quaternion():
    assert parse_quaternion("0.5") == Quaternion(0.5)
    assert parse_quaternion("0,1,0,0") == Quaternion(0, 1)
    assert parse_quaternion([1, 2, 3, 4]) == Quaternion(1, 2, 3, 4)
    with pytest.raises(ValueError):
        parse_quaternion("1,2")
    with pytest.raises(ValueError):
        parse_quaternion("x")


def test_dumps_deterministic():
    assert dumps({"b": 0.1, "a": [1, float("nan")], "c": True}) == '{"a": [1, null], "b": 0.10000000000000001, "c": true}'


@pytest.mark.parametrize(
    "args,case,code",
    [
        (["--alpha", "0.5", "--beta", "0.5"], "A1", 0),
        (["--alpha", "0,0.25,0,0", "--beta", "0,0,0.5,0"], "A21", 0),
        (["--alpha", "0,0.5,0,0", "--beta", "0,0,0.5,0"], "A22", 0),
        (["--alpha", "0,0.5,0,0", "--beta", "0,0.5,0,0", "--lambda", "0,0,1,0"], "A3", 0),
        (["--p", "2", "--beta", "0.5", "--lambda", "0,0,1,0"], "B", 0),
        (["--alpha", "0.25", "--beta", "0.5", "--lambda", "1"], "Invalid", 2),
    ],
)
def test_classify(capsys, args, case, code):
    c, out, _ = run(capsys, "classify", *args)
    assert (c, out.strip()) == (code, case)


def test_classify_needs_params(capsys):
    assert run(capsys, "classify")[0] == 2


def test_autdim_json_and_determinism(capsys, tmp_path):
    args = ["autdim", "--alpha", "0,0.5,0,0", "--beta", "0,0.5,0,0", "--lambda", "1", "--seed", "3"]
    c1, out1, _ = run(capsys, *args)
    c2, out2, _ = run(capsys, *args)
    assert c1 == c2 == 0 and out1 == out2
    data = json.loads(out1)
    assert data["nullity"] == 4 and data["seed"] == 3 and data["pass"] is True


def test_autdim_direct_p2_is_misuse(capsys):
    c, _, err = run(capsys, "autdim", "--p", "2", "--beta", "0.5", "--lambda", "0,0,1,0", "--method", "direct")
    assert c == 3 and "nonlinear" in err


def test_autdim_invalid_params(capsys):
    assert run(capsys, "autdim", "--alpha", "0.9", "--beta", "0.5")[0] == 2


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SLICEQUAT_SEED", "7")
    _, out, _ = run(capsys, "autdim", "--alpha", "0.5", "--beta", "0.5", "--degree", "2")
    assert json.loads(out)["seed"] == 7
    monkeypatch.setenv("SLICEQUAT_SEED", "nope")
    assert run(capsys, "autdim", "--alpha", "0.5", "--beta", "0.5")[0] == 2


def test_config_then_flags(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alpha": "0.5", "beta": "0.5", "degree": 2, "seed": 5}))
    _, out, _ = run(capsys, "autdim", "--config", str(cfg), "--seed", "9")
    data = json.loads(out)
    assert data["degree"] == 2 and data["seed"] == 9
    assert run(capsys, "autdim", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_autdim_csv(capsys, tmp_path):
    out_file = tmp_path / "r.csv"
    c, _, _ = run(capsys, "autdim", "--p", "2", "--beta", "0.5", "--lambda", "0,0,1,0", "--format", "csv", "--out", str(out_file))
    rows = list(csv.DictReader(out_file.open()))
    assert c == 0 and rows[0]["case"] == "B" and rows[0]["nullity"] == "5"


def test_verify_theorems_injected_wrong_expectation(capsys, tmp_path):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"grid": [
        {"label": "ok", "alpha": "0.5", "beta": "0.5", "expected": 16},
        {"label": "wrong", "alpha": "0.5", "beta": "0.5", "expected": 15},
    ]}))
    out_file = tmp_path / "g.csv"
    c, _, err = run(capsys, "verify-theorems", "--config", str(cfg), "--format", "csv", "--out", str(out_file))
    assert c == 1
    assert "PASS  ok" in err and "FAIL  wrong" in err
    rows = list(csv.DictReader(out_file.open()))
    assert [r["pass"] for r in rows] == ["True", "False"]
    assert set(rows[0]) == {"case", "alpha", "beta", "lambda", "p", "nullity", "expected", "pass"}


def test_scan_family_kind1(capsys):
    c, out, _ = run(capsys, "scan-family", "--kind", "1", "--alpha", "0.5", "--format", "csv")
    rows = list(csv.DictReader(out.splitlines()))
    assert c == 0 and [r["nullity"] for r in rows] == ["16", "8"]
    assert list(rows[0]) == ["lambda", "case", "nullity", "expected", "pass", "slice_regular_family"]


def test_scan_family_kind2_nonzero(capsys):
    c, out, _ = run(capsys, "scan-family", "--kind", "2", "--lambdas", "0,0,1,0;0,1,0,1")
    data = json.loads(out)
    assert c == 0 and [r["nullity"] for r in data["rows"]] == [5, 5]


def test_scan_family_empty(capsys):
    assert run(capsys, "scan-family", "--kind", "2", "--lambdas", ";")[0] == 2


def test_orbit(capsys):
    c, out, _ = run(capsys, "orbit", "--alpha", "0.5", "--beta", "0.5", "--a", "1;1", "--b", "0.25;0.25")
    assert c == 0 and json.loads(out) == {"equivalent": True, "k": 2}
    c, out, _ = run(capsys, "orbit", "--alpha", "0.5", "--beta", "0.5", "--a", "1;1", "--b", "1;0.3")
    assert c == 1 and json.loads(out)["k"] is None


def test_stem_check(capsys, tmp_path):
    poly = tmp_path / "p.json"
    poly.write_text(json.dumps([{"h": 2, "k": 1, "coeff": [0.1, 0.2, -0.3, 0.4]}]))
    c, out, _ = run(capsys, "stem-check", "--poly", str(poly))
    assert c == 0 and json.loads(out)["pass"] is True
