import json
import subprocess
import sys

import pytest

from k3acm.cli import canonical_json, main
from k3acm.nikulin import builtin


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lattice_info(capsys):
    code, out, _ = run(capsys, "lattice-info", "builtin:dp9")
    rep = json.loads(out)
    assert code == 0
    assert rep["result"]["two_elementary"] == {"rho": 9, "a": 9, "delta": 1}
    assert rep["result"]["signature"] == [1, 8, 0]
    assert rep["lattice"]["gram_sha256"] == builtin("dp9").fingerprint()


def test_lattice_info_u2(capsys):
    rep = json.loads(run(capsys, "lattice-info", "builtin:u2")[1])
    assert rep["result"]["two_elementary"] == {"rho": 2, "a": 2, "delta": 0}


def test_malformed_gram(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "bad", "basis": ["a", "b"], "gram": [[2, 1], [0, -2]]}))
    code, out, err = run(capsys, "lattice-info", str(path))
    assert code == 2 and out == ""
    assert "(0, 1)" in err or "[0][1]" in err or "0,1" in err


def test_missing_file(capsys):
    assert run(capsys, "lattice-info", "/nonexistent.json")[0] == 2


def test_enumerate_roots(capsys):
    rep = json.loads(run(capsys, "enumerate", "builtin:dp9", "--degree", "2", "--square", "-2")[1])
    assert rep["result"]["count"] == 240


@pytest.mark.parametrize("degree", ["0", "1"])
def test_enumerate_empty(capsys, degree):
    rep = json.loads(run(capsys, "enumerate", "builtin:dp9", "--degree", degree, "--square", "-2")[1])
    assert rep["result"]["count"] == 0


def test_enumerate_needs_square(capsys):
    assert run(capsys, "enumerate", "builtin:dp9", "--degree", "2")[0] == 2


def test_classify_block(capsys):
    rep = json.loads(run(capsys, "classify", "builtin:dp9", "--class", "D1")[1])
    assert rep["result"]["verdict"]["status"] == "AcmInitialized"
    assert rep["result"]["verdict"]["case"] == "a"
    assert rep["result"]["structure"]["numeric_case"] == "a"


def test_classify_x(capsys):
    rep = json.loads(run(capsys, "classify", "builtin:dp9", "--class", "X")[1])
    v = rep["result"]
    assert (v["verdict"]["D_sq"], v["verdict"]["HD"], v["structure"]["numeric_case"]) == (2, 6, "b")


def test_classify_b(capsys):
    rep = json.loads(run(capsys, "classify", "builtin:dp9", "--class", "1,0,0,0,0,0,0,0,0")[1])
    v = rep["result"]["verdict"]
    assert (v["status"], v["D_sq"], v["HD"]) == ("Not", 2, 18)


def test_classify_multiple(capsys):
    rep = json.loads(run(capsys, "classify", "builtin:dp9", "--class", "2*X")[1])
    assert rep["result"]["structure"]["numeric_case"] == "d"


def test_classify_general_out_of_scope(capsys):
    code, _, err = run(capsys, "classify", "builtin:dp9", "--class", "D1", "--table", "general",
                       "--polarization", "H")
    assert code == 2 and "H²-4" in err


def test_classify_not_effective(capsys):
    assert run(capsys, "classify", "builtin:dp9", "--class=-D1")[0] == 2


def test_verify_families(capsys):
    code, out, _ = run(capsys, "verify", "builtin:dp9", "families")
    assert code == 0 and json.loads(out)["result"]["passed"]


def test_verify_nikulin(capsys):
    assert run(capsys, "verify", "builtin:dp9", "nikulin")[0] == 0


def test_verify_failure_exit_code(capsys):
    # the roots suite needs dp9; on u2 it is an input error, not a failure
    assert run(capsys, "verify", "builtin:u2", "roots240")[0] == 2


def test_verify_fail_returns_one(capsys, monkeypatch):
    from k3acm import cli
    from k3acm.suites import SuiteResult
    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: SuiteResult("x", False, {}))
    assert run(capsys, "verify", "builtin:dp9", "nikulin")[0] == 1


def test_builtin_round_trip(capsys, tmp_path):
    out = run(capsys, "builtin", "dp9")[1]
    path = tmp_path / "dp9.json"
    path.write_text(out)
    rep = json.loads(run(capsys, "lattice-info", str(path))[1])
    assert rep["lattice"]["gram_sha256"] == builtin("dp9").fingerprint()


def test_byte_identical(capsys):
    args = ("classify", "builtin:dp9", "--class", "3*X")
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    assert first.endswith("\n") and ": " not in first


def test_separate_processes_identical():
    cmd = [sys.executable, "-m", "k3acm.cli", "enumerate", "builtin:dp9", "--degree", "4", "--square", "0"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b


def test_timing_flag(capsys):
    rep = json.loads(run(capsys, "--timing", "lattice-info", "builtin:u2")[1])
    assert isinstance(rep["timing_ms"], int)


def test_table_format(capsys):
    out = run(capsys, "--format", "table", "lattice-info", "builtin:dp9")[1]
    assert "result.signature: [1, 8, 0]" in out


def test_canonical_json_rejects_floats():
    with pytest.raises(TypeError):
        canonical_json({"a": 1.5})
    assert canonical_json({"b": 1, "a": [2]}) == '{"a":[2],"b":1}\n'
