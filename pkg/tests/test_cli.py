import json
import subprocess
import sys

import pytest

from shadow_obstruct.cli import main


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    return code


def test_instances_round_trip(tmp_path, capsys):
    assert main(["instances", "motzkin"]) == 0
    text = capsys.readouterr().out
    from shadow_obstruct.instances import motzkin
    from shadow_obstruct.polytext import parse_poly

    assert parse_poly(text) == motzkin()
    assert main(["instances", "qc5"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["matrix"][0] == ["1", "1", "-1", "-1", "1"]
    assert main(["instances", "hilbert-univariate", "--seed", "4"]) == 0
    assert main(["instances", "nope"]) == 1
    assert main(["instances", "odd-cycle"]) == 1  # missing --m


def test_sos_check_exit_codes(tmp_path, capsys):
    poly = tmp_path / "motzkin.poly"
    main(["instances", "motzkin", "--output", str(poly)])
    assert main(["sos-check", str(poly), "--d", "1"]) == 2
    capsys.readouterr()
    assert main(["sos-check", str(poly), "--d", "2"]) == 0
    capsys.readouterr()
    bad = tmp_path / "bad.poly"
    bad.write_text("x1 + @@")
    assert main(["sos-check", str(bad)]) == 1
    missing = tmp_path / "missing.poly"
    assert main(["sos-check", str(missing)]) == 1


def test_sigma_d_json_deterministic(tmp_path):
    poly = tmp_path / "m.poly"
    main(["instances", "motzkin", "--output", str(poly)])
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["sigma-d", str(poly), "--d", "1", "--json", "--output", str(out1)]) == 2
    assert main(["sigma-d", str(poly), "--d", "1", "--json", "--output", str(out2)]) == 2
    assert out1.read_bytes() == out2.read_bytes()


def test_copositive_and_verify_round_trip(tmp_path, capsys):
    mat = tmp_path / "id3.json"
    mat.write_text(json.dumps([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]))
    report = tmp_path / "report.json"
    assert main(["copositive", str(mat), "--dmax", "2", "--json", "--output", str(report)]) == 0
    capsys.readouterr()
    assert main(["verify", str(report)]) == 0
    out = capsys.readouterr().out
    assert "VALID" in out

    # corrupt the certificate: verification must fail
    data = json.loads(report.read_text())
    cert = data["per_d"][0]["certificate"]
    cert["gram"][0][0] = "99"
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(data))
    assert main(["verify", str(broken)]) == 2


def test_verify_rejects_non_certificates(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"hello": 1}))
    assert main(["verify", str(p)]) == 1
    q = tmp_path / "y.json"
    q.write_text("not json")
    assert main(["verify", str(q)]) == 1


def test_asymmetric_copositive_input_rejected(tmp_path):
    mat = tmp_path / "bad.json"
    mat.write_text(json.dumps([["1", "2"], ["3", "1"]]))
    assert main(["copositive", str(mat)]) == 1


def test_hahn_eval_ops(tmp_path, capsys):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({
        "n": 1,
        "terms": [{"exp": ["0"], "coeff": "1"}, {"exp": ["1"], "coeff": "1"}],
        "trunc": ["4"],
    }))
    b = tmp_path / "b.json"
    b.write_text(json.dumps({
        "n": 1, "terms": [{"exp": ["2"], "coeff": "1"}], "trunc": None,
    }))
    assert main(["hahn-eval", "--op", "mul", str(a), str(b)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["terms"][0]["exp"] == ["2"]
    assert main(["hahn-eval", "--op", "inverse", str(a)]) == 0
    inv = json.loads(capsys.readouterr().out)
    assert inv["terms"][1]["coeff"] == "-1"
    assert main(["hahn-eval", "--op", "sqrt", str(b)]) == 0
    capsys.readouterr()
    assert main(["hahn-eval", "--op", "valuation", str(b)]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert main(["hahn-eval", "--op", "residue", str(a)]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert main(["hahn-eval", "--op", "compare", str(a), str(b)]) == 0
    assert capsys.readouterr().out.strip() == "1"
    # division by a zero-to-truncation series is a usage error, not a crash
    z = tmp_path / "z.json"
    z.write_text(json.dumps({"n": 1, "terms": [], "trunc": ["3"]}))
    assert main(["hahn-eval", "--op", "inverse", str(z)]) == 1


def test_precision_env_override(monkeypatch):
    from shadow_obstruct.cli import precision_schedule
    from fractions import Fraction as F

    monkeypatch.setenv("SHADOW_OBSTRUCT_PRECISION", "1e-3,1e-9")
    assert precision_schedule() == (F(1, 10**3), F(1, 10**9))
    monkeypatch.delenv("SHADOW_OBSTRUCT_PRECISION")
    assert len(precision_schedule()) == 3
    assert precision_schedule("1e-2") == (F(1, 100),)


def test_demo_motzkin_passes(capsys):
    assert main(["demo", "motzkin"]) == 0
    out = capsys.readouterr().out
    assert "result: PASS" in out
    assert main(["demo", "unknown-name"]) == 1


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "shadow_obstruct", "instances", "horn"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "x1" in proc.stdout
