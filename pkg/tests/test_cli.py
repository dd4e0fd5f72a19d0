import json
import subprocess
import sys

import pytest

from qschur.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mul_worked_example(capsys):
    code, out, _ = run(capsys, "mul", "--n", "2", "--r", "2", "[[1,1],[0,0]]", "[[0,1],[1,0]]")
    assert code == 0
    assert out.strip() == '[{"matrix":[[1,1],[0,0]],"coeff":["0","1"]}]'


def test_options_before_the_verb(capsys):
    code, out, _ = run(capsys, "--n", "2", "--r", "2", "--primes", "2,3,5,7", "mul", "[[1,1],[0,0]]", "[[0,1],[1,0]]")
    assert code == 0 and json.loads(out) == [{"matrix": [[1, 1], [0, 0]], "coeff": ["0", "1"]}]


def test_verify_serre_passes(capsys):
    code, out, _ = run(capsys, "verify", "serre", "--n", "3", "--r", "2")
    assert code == 0 and json.loads(out)["failures"] == []


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "mult_basis", "--n", "3", "--r", "2")
    assert code == 1 and json.loads(out)["failures"]


def test_gmul_zero(capsys):
    code, out, _ = run(capsys, "gmul", "--n", "3", "--r", "2", "[[2,0,0],[0,0,0],[0,0,0]]", "[[0,0,0],[0,2,0],[0,0,0]]")
    assert code == 0 and json.loads(out) == {"result": "zero"}


def test_gmul_product(capsys):
    code, out, _ = run(capsys, "gmul", "--n", "3", "--r", "2", "[[0,1,0],[0,0,0],[0,0,1]]", "[[0,0,0],[0,0,1],[0,0,1]]")
    assert json.loads(out) == {"result": [[0, 0, 1], [0, 0, 0], [0, 0, 1]]}


def test_module_verbs(capsys):
    _, out, _ = run(capsys, "hall", "--n", "3", "[[1,2,2]]", "[[1,2,1]]", "[[1,2,1]]")
    assert json.loads(out) == {"polynomial": ["1", "1"]}
    _, out, _ = run(capsys, "genext", "--n", "3", "[[1,2,1]]", "[[2,3,1]]")
    assert json.loads(out) == {"n": 3, "segments": [[1, 3, 1]]}
    _, out, _ = run(capsys, "theta", "--n", "3", "--r", "2", '{"n":3,"segments":[[1,3,1]]}')
    assert len(json.loads(out)) == 3
    _, out, _ = run(capsys, "gamma", "--n", "3", "--r", "2", "[[1,2,3]]")
    assert json.loads(out) == []


@pytest.mark.parametrize(
    "argv",
    [
        ["mul", "--n", "2", "--r", "2", "[[1,1],[0]]", "[[0,1],[1,0]]"],
        ["mul", "--n", "2", "--r", "3", "[[1,1],[0,0]]", "[[0,1],[1,0]]"],
        ["mul", "--n", "2", "--r", "2", "not json", "[[0,1],[1,0]]"],
        ["mul", "--n", "2", "--r", "2", "--primes", "2,4", "[[1,1],[0,0]]", "[[0,1],[1,0]]"],
        ["mul", "--n", "2", "--r", "2", "--primes", "2,3", "[[1,1],[0,0]]", "[[0,1],[1,0]]"],
        ["gmul", "--n", "2", "--r", "1", "[[0,0],[1,0]]", "[[1,0],[0,0]]"],
        ["verify", "bogus", "--n", "3", "--r", "2"],
        ["theta", "--n", "3", "[[1,2,1]]"],
        ["hall", "--n", "3", "[[1,3,1]]", "[[1,2,1]]", "[[1,2,1]]"],
        ["--n", "1", "verify", "serre"],
        ["frobnicate"],
        [],
    ],
)
def test_invalid_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_table_determinism_and_cache(tmp_path, capsys):
    outs = []
    for jobs, cache in (("1", "c1"), ("3", "c1"), ("2", "c2")):
        path = tmp_path / f"t{jobs}{cache}.json"
        code, _, _ = run(capsys, "table", "schur", "--n", "2", "--r", "2", "--out", str(path), "--jobs", jobs, "--cache", str(tmp_path / cache))
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    (tmp_path / "c1" / "schur_n2_r2.json").unlink()
    path = tmp_path / "again.json"
    run(capsys, "table", "schur", "--n", "2", "--r", "2", "--out", str(path), "--cache", str(tmp_path / "c1"))
    assert path.read_bytes() == outs[0]


@pytest.mark.parametrize("kind", ["generic", "zero"])
def test_other_tables(tmp_path, capsys, kind):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "table", kind, "--n", "3", "--r", "2", "--out", str(a))
    run(capsys, "table", kind, "--n", "3", "--r", "2", "--out", str(b), "--jobs", "2")
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["kind"] == kind and doc["entries"]


def test_environment_overrides(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QSCHUR_CACHE", str(tmp_path / "envcache"))
    monkeypatch.setenv("QSCHUR_JOBS", "2")
    code, _, _ = run(capsys, "table", "schur", "--n", "2", "--r", "1", "--out", str(tmp_path / "t.json"))
    assert code == 0
    assert (tmp_path / "envcache" / "schur_n2_r1.json").exists()
    monkeypatch.setenv("QSCHUR_JOBS", "0")
    code, _, _ = run(capsys, "verify", "serre", "--n", "3", "--r", "2")
    assert code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qschur.cli", "--n", "3", "--r", "2", "verify", "serre"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["suite"] == "serre"
