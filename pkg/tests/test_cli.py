import io
import json
from fractions import Fraction

import pytest

from antisym import cli
from antisym.errors import InputError
from antisym.reflection_coloring import IntervalSystem, build_system


def run(args, capsys=None):
    buf = io.StringIO()
    code = cli.run(args, stdout=buf)
    return code, json.loads(buf.getvalue()), buf.getvalue()


@pytest.fixture
def points_file(tmp_path):
    p = tmp_path / "points.txt"
    p.write_text("0\n-1\n1\n")
    return p


def test_load_points_keeps_order(points_file, tmp_path):
    assert cli.load_points(points_file) == [0, -1, 1]
    one = tmp_path / "one.txt"
    one.write_text("1/3\n")
    assert cli.load_points(one) == [Fraction(1, 3)]


def test_load_points_errors(tmp_path):
    dup = tmp_path / "dup.txt"
    dup.write_text("1\n2/2\n")
    with pytest.raises(InputError, match=":2:"):
        cli.load_points(dup)
    bad = tmp_path / "bad.txt"
    bad.write_text("1\n\nx/2\n")
    with pytest.raises(InputError, match=":3:"):
        cli.load_points(bad)
    with pytest.raises(InputError):
        cli.load_points(tmp_path / "missing.txt")


def test_thm1_file(points_file):
    code, rep, _ = run(["thm1", "--points", str(points_file)])
    assert code == 0 and rep["status"] == "pass" and rep["exit_code"] == 0
    assert [c["color"] for c in rep["certificate"]["coloring"]] == [0, 0, 1]
    assert rep["elapsed"] is None


def test_thm1_random_records_seed():
    code, rep, _ = run(["thm1", "--random", "40", "--seed", "5"])
    assert code == 0
    assert rep["certificate"]["source"] == {"random": 40, "seed": 5}


def test_system_roundtrip(points_file, tmp_path):
    out = tmp_path / "sys.json"
    run(["thm1", "--points", str(points_file), "--system-out", str(out)])
    loaded = IntervalSystem.from_json(json.loads(out.read_text()))
    assert loaded == build_system([Fraction(0), Fraction(-1), Fraction(1)])


def test_thm2_exhaustive():
    code, rep, _ = run(["thm2", "--size", "8", "--exhaustive"])
    cert = rep["certificate"]
    assert code == 0 and rep["status"] == "pass"
    assert cert["initial_segment"]["pairs_checked"] > 0
    assert cert["crossed_quadruples"]["quadruples_checked"] > 0
    assert cert["reconstruction"]["unions_checked"] == 256


def test_thm2_size_bound():
    code, rep, _ = run(["thm2", "--size", "40"])
    assert code == 2 and rep["status"] == "error"


def test_thm3_grid_and_random():
    code, rep, _ = run(["thm3", "--dims", "3", "--coeffs", "1,1/2"])
    assert code == 0 and rep["certificate"]["max"] <= 1
    code, rep, _ = run(["thm3", "--dims", "6", "--coeffs", "1,-1", "--random", "2", "--window-size", "30"])
    assert code == 0 and len(rep["certificate"]["windows"]) == 2


def test_thm6_commands():
    code, rep, _ = run(["thm6", "color", "--x", "1/3"])
    assert code == 0 and rep["certificate"]["level"] == 3
    code, rep, _ = run(["thm6", "sx", "--x", "0/1", "--max-h", "4", "--max-den", "24"])
    assert code == 0 and rep["certificate"]["violations"] == []
    code, rep, _ = run(["thm6", "sx", "--x", "1", "--max-h", "4", "--max-den", "24"])
    assert [v["h"] for v in rep["certificate"]["violations"]] == ["1/2", "1"]
    code, rep, _ = run(["thm6", "slice", "--n", "3"])
    assert code == 0 and rep["certificate"]["odd_edges"] == 0
    code, rep, _ = run(["thm6", "slice", "--n", "6"])
    assert code == 2


def test_pattern_and_ramsey():
    code, rep, _ = run(["pattern", "--n", "1"])
    assert code == 0 and rep["certificate"]["pairs"] == 1
    code, rep, _ = run(["pattern", "--n", "4", "--vectors"])
    assert rep["certificate"]["vectors"]["distinct"] == 15
    code, rep, _ = run(["ramsey", "--m", "6", "--colors", "2", "--chain", "3", "--exhaustive"])
    assert code == 0 and rep["certificate"]["always"] is True
    code, rep, _ = run(["ramsey", "--m", "5", "--exhaustive"])
    assert rep["certificate"]["counterexample"] is not None
    code, rep, _ = run(["ramsey", "--m", "8", "--seed", "3"])
    assert code == 0


def test_usage_errors_exit_two(capsys):
    code, rep, _ = run(["frobnicate"])
    assert code == 2 and rep["status"] == "error"
    assert "usage" in capsys.readouterr().err
    code, rep, _ = run([])
    assert code == 2
    code, rep, _ = run(["thm1"])
    assert code == 2


def test_pass_writes_nothing_to_stderr(capsys, points_file):
    run(["thm1", "--points", str(points_file)])
    assert capsys.readouterr().err == ""


def test_bad_thread_setting(monkeypatch):
    monkeypatch.setenv("ANTISYM_THREADS", "zero")
    code, rep, _ = run(["pattern", "--n", "2"])
    assert code == 2
    monkeypatch.setenv("ANTISYM_THREADS", "4")
    assert run(["pattern", "--n", "2"])[0] == 0


def test_timing_flag():
    _, rep, _ = run(["--timing", "pattern", "--n", "2"])
    assert isinstance(rep["elapsed"], float)


def test_reports_are_byte_stable(tmp_path, points_file):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["--out", str(a), "thm1", "--points", str(points_file)])
    run(["--out", str(b), "thm1", "--points", str(points_file)])
    assert a.read_bytes() == b.read_bytes()
    cli.save_report({"z": Fraction(1, 2), "a": [Fraction(3)]}, a)
    assert a.read_text() == '{\n  "a": [\n    "3"\n  ],\n  "z": "1/2"\n}\n'


def test_error_report_echoes_exit_code(tmp_path):
    out = tmp_path / "err.json"
    code = cli.run(["--out", str(out), "pattern", "--n", "99"], stdout=io.StringIO())
    assert code == 2 and json.loads(out.read_text())["exit_code"] == 2
