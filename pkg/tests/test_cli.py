import io
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from toricset.cli import main, read_golden
from toricset.polyring import family_ring

from conftest import GOLDEN, REFERENCE_GENERATORS

ROOT = Path(__file__).resolve().parent.parent
EX1 = ROOT / "params" / "example1.json"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def write_json(tmp_path):
    def _write(obj, name="p.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return p

    return _write


def test_params_file_is_example1():
    assert json.loads(EX1.read_text()) == {"n": 3, "d": [2, 3], "f": [3, 5], "g": [1, 1], "h": [3, 5]}


# ---------------------------------------------------------------- validate


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", EX1)
    assert code == 0
    d = json.loads(out)
    assert d["ok"] is True
    assert d["witness"]["p"] == 2 and d["witness"]["q"] == 3


def test_validate_violation(capsys, write_json):
    p = write_json({"n": 3, "d": [2, 4], "f": [3, 5], "g": [1, 1], "h": [3, 5]})
    code, out, _ = run(capsys, "validate", p)
    assert code == 1
    d = json.loads(out)
    assert d["ok"] is False
    pair = [v for v in d["violations"] if v["condition"] == "gcd(d_i,d_j)=1"]
    assert pair and pair[0]["indices"] == [1, 2]
    assert "at (1,2)" in pair[0]["message"]


@pytest.mark.parametrize(
    "content",
    [
        {"n": 3, "d": [2, 3], "f": [3, 5], "g": [1, 1]},
        {"n": 3, "d": [2, 3], "f": [3, 5], "g": [1, 1], "h": [3, 5], "extra": 1},
        {"n": 3, "d": [2, 3, 5], "f": [3, 5], "g": [1, 1], "h": [3, 5]},
        {"n": 2, "d": [2], "f": [3], "g": [1], "h": [3]},
        {"n": 3, "d": [2, 0], "f": [3, 5], "g": [1, 1], "h": [3, 5]},
        "{not json",
        "[1, 2]",
    ],
)
def test_validate_input_errors(capsys, write_json, content):
    code, _, err = run(capsys, "validate", write_json(content))
    assert code == 2
    assert err.startswith("error:")


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "nope.json")[0] == 2


def test_bad_usage(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "equations", EX1, "--field", "F4")[0] == 2
    assert run(capsys, "verify", EX1, "--sample", "10", "--exhaustive")[0] == 2


# ---------------------------------------------------------------- equations


def test_equations_text(capsys):
    code, out, _ = run(capsys, "equations", EX1)
    assert code == 0
    R = family_ring(3)
    got = dict(ln.split(" = ") for ln in out.splitlines())
    want = {
        "F1": "y1^2 - x1^3*x3^2",
        "F2": "y2^3 - x2^5*x3^3",
        "F": "y3^6 - x1^9*x2^10",
        "G": "x3^2*y3 - y1*y2",
    }
    assert list(got) == list(want)
    for k in want:
        assert R.parse(got[k]).same_up_to_scalar(R.parse(want[k]))


def test_equations_json_vectors(capsys):
    code, out, _ = run(capsys, "equations", EX1, "--json")
    assert code == 0
    d = json.loads(out)
    vecs = {e["name"]: e["vector"] for e in d["equations"]}
    assert vecs["F1"] == [-3, 0, -2, 2, 0, 0]
    assert vecs["F"] == [-9, -10, 0, 0, 0, 6]
    assert vecs["G"] == [0, 0, 2, -1, -1, 1] or vecs["G"] == [0, 0, -2, 1, 1, -1]


def test_equations_golden(capsys):
    code, out, _ = run(capsys, "equations", EX1, "--golden", GOLDEN / "example1_equations.txt")
    assert code == 0
    assert out.strip().endswith("golden: match")


def test_equations_golden_mismatch(capsys, tmp_path):
    g = tmp_path / "eq.txt"
    g.write_text("y1^2 - x1^3*x3^2\n")
    assert run(capsys, "equations", EX1, "--golden", g)[0] == 1


def test_equations_bless_round_trip(capsys, tmp_path):
    g = tmp_path / "sub" / "eq.txt"
    assert run(capsys, "equations", EX1, "--golden", g, "--bless")[0] == 0
    assert g.read_text() == (GOLDEN / "example1_equations.txt").read_text()
    assert run(capsys, "equations", EX1, "--golden", g)[0] == 0


def test_equations_invalid_family(capsys, write_json):
    p = write_json({"n": 3, "d": [2, 4], "f": [3, 5], "g": [1, 1], "h": [3, 5]})
    code, out, _ = run(capsys, "equations", p)
    assert code == 1
    assert out.startswith("invalid family")


def test_equations_over_prime_field(capsys):
    code, out, _ = run(capsys, "equations", EX1, "--field", "F7", "--json")
    assert code == 0 and json.loads(out)["field"] == "F7"


def test_equations_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(EX1.read_text()))
    assert run(capsys, "equations", "-")[0] == 0


# ---------------------------------------------------------------- ideal


def test_ideal_against_reference_generators(capsys):
    code, out, _ = run(capsys, "ideal", EX1, "--golden", GOLDEN / "example1_reference_generators.txt")
    assert code == 0
    assert "# golden (8 generators): equal ideals" in out


def test_ideal_blessed_golden(capsys):
    code, out, _ = run(capsys, "ideal", EX1, "--json", "--golden", GOLDEN / "example1_ideal.txt")
    assert code == 0
    d = json.loads(out)
    assert d["golden_match"] is True
    lines = [ln for ln in (GOLDEN / "example1_ideal.txt").read_text().splitlines() if ln]
    assert sorted(d["generators"]) == lines
    assert "seconds" not in d["certificate"]


def test_ideal_golden_mismatch(capsys):
    code, out, _ = run(capsys, "ideal", EX1, "--golden", GOLDEN / "example1_equations.txt")
    assert code == 1
    assert "MISMATCH" in out


def test_ideal_timing_flag(capsys):
    code, out, _ = run(capsys, "ideal", EX1, "--json", "--timing")
    assert code == 0 and "seconds" in json.loads(out)["certificate"]


def test_ideal_identity_matrix(capsys, write_json):
    p = write_json({"matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    code, out, _ = run(capsys, "ideal", p, "--json")
    assert code == 0
    d = json.loads(out)
    assert d["generators"] == [] and d["lattice_basis"] == []


def test_ideal_matrix_with_names(capsys, write_json):
    p = write_json({"matrix": [[3, 2, 1, 0], [0, 1, 2, 3]], "variables": ["a", "b", "c", "d"]})
    code, out, _ = run(capsys, "ideal", p, "--json")
    assert code == 0
    assert len(json.loads(out)["generators"]) == 3


def test_ideal_bad_matrix(capsys, write_json):
    assert run(capsys, "ideal", write_json({"matrix": 5}))[0] == 2


def test_ideal_budget_exceeded(capsys):
    code, _, err = run(capsys, "ideal", EX1, "--budget", "5")
    assert code == 3
    assert "budget" in err and "partial basis" in err


def test_ideal_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("TORICSET_PAIR_BUDGET", "5")
    assert run(capsys, "ideal", EX1)[0] == 3


def test_ideal_invalid_family(capsys, write_json):
    p = write_json({"n": 3, "d": [2, 4], "f": [3, 5], "g": [1, 1], "h": [3, 5]})
    assert run(capsys, "ideal", p)[0] == 1


def test_read_golden_skips_comments():
    polys = read_golden(GOLDEN / "example1_reference_generators.txt", family_ring(3))
    assert [p.to_str() for p in polys] == [family_ring(3).parse(s).to_str() for s in REFERENCE_GENERATORS]


# ---------------------------------------------------------------- verify


def test_verify_full_suite(capsys):
    code, out, _ = run(capsys, "verify", EX1)
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "PASS"
    assert sum(ln.startswith("PASS radical") for ln in lines) == 4
    assert sum(ln.startswith("PASS points") for ln in lines) == 3
    assert any(ln.startswith("PASS lift-audit q=7") for ln in lines)


def test_verify_golden(capsys):
    code, out, _ = run(capsys, "verify", EX1, "--golden", GOLDEN / "example1_verify.json")
    assert code == 0
    assert "golden: match" in out


def test_verify_drop_equation(capsys):
    code, out, _ = run(capsys, "verify", EX1, "--field", "Q", "--drop-equation", "G")
    assert code == 1
    assert out.splitlines()[0].startswith("FAIL radical field=Q dropped=G")
    assert "expected: an equation was dropped" in out


def test_verify_drop_unknown_equation(capsys):
    assert run(capsys, "verify", EX1, "--field", "Q", "--drop-equation", "H")[0] == 2


def test_verify_sample_is_deterministic(capsys):
    argv = ("verify", EX1, "--q", "101", "--sample", "10000", "--seed", "42", "--json")
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a[0] == b[0] == 0
    assert a[1] == b[1]
    sec = json.loads(a[1])["checks"][0]
    assert sec["seed"] == 42 and sec["points_checked"] == 10000 and sec["mode"] == "sample"


def test_verify_point_budget(capsys, monkeypatch):
    monkeypatch.setenv("TORICSET_POINT_BUDGET", "1000")
    code, _, err = run(capsys, "verify", EX1, "--q", "5")
    assert code == 3
    assert "sample mode" in err


def test_verify_pair_budget(capsys):
    code, out, _ = run(capsys, "verify", EX1, "--field", "Q", "--budget", "1000000")
    assert code == 0
    # a radical test on its own needs more than a handful of pairs
    code, _, _ = run(capsys, "verify", EX1, "--field", "Q", "--budget", "5")
    assert code == 3


def test_verify_invalid_family(capsys, write_json):
    p = write_json({"n": 3, "d": [2, 4], "f": [3, 5], "g": [1, 1], "h": [3, 5]})
    assert run(capsys, "verify", p)[0] == 1


def test_verify_json_has_no_timings(capsys):
    code, out, err = run(capsys, "verify", EX1, "--q", "2", "--lift-audit", "3", "--json")
    assert code == 0
    assert '"seconds"' not in out
    assert "PASS lift-audit q=3" in err


def test_verify_workers(capsys):
    a = run(capsys, "verify", EX1, "--q", "3", "--json")
    b = run(capsys, "verify", EX1, "--q", "3", "--json", "--workers", "2")
    assert a == b


@pytest.mark.skipif(shutil.which("toricset") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["toricset", "validate", str(EX1)], capture_output=True, text=True)
    assert res.returncode == 0
    res = subprocess.run([sys.executable, "-m", "toricset.cli", "equations", str(EX1)], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("F1 = ")
