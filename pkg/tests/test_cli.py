import json
import subprocess
import sys

import pytest

from schwarzkit import CVector
from schwarzkit.cli import main
from schwarzkit.io import write_vectors

S = 2 ** -0.5


@pytest.fixture
def data(tmp_path):
    path = tmp_path / "v.json"
    # rows: e1, e2, (e1+e2)/sqrt2, 2i*e1, (1+i, 2)
    write_vectors(path, [CVector([1, 0]), CVector([0, 1]), CVector([S, S]), CVector([2j, 0]),
                         CVector([1 + 1j, 2])])
    return path


def _json(tmp_path, argv):
    out = tmp_path / "out.json"
    code = main(argv + ["--json", str(out)])
    return code, json.loads(out.read_text())


@pytest.mark.parametrize("method,extra", [
    ("quad", ["--z", "2"]),
    ("rs", ["--e", "0"]),
    ("detp", ["--e", "0", "--p", "3"]),
    ("det2", ["--e", "0", "--mode", "real"]),
    ("projection", ["--projector", "0"]),
    ("ntuple-general", ["--e", "2", "--order", "quadratic"]),
    ("ntuple-basis-max", ["--order", "p2"]),
    ("ntuple-mean", ["--p", "3"]),
])
def test_bound_methods(tmp_path, data, method, extra):
    code, out = _json(tmp_path, ["bound", "--input", str(data), "--x", "0", "--y", "1",
                                 "--method", method] + extra)
    assert code == 0
    assert all(r["satisfied"] for r in out["reports"])


def test_bound_det2_equality_case(tmp_path, data):
    code, out = _json(tmp_path, ["bound", "--input", str(data), "--x", "3", "--y", "4", "--e", "0",
                                 "--method", "det2"])
    assert code == 0 and out["reports"][0]["equality"]


def test_bound_basis_max_reports_m(tmp_path, data):
    _, out = _json(tmp_path, ["bound", "--input", str(data), "--x", "0", "--y", "1",
                              "--method", "ntuple-basis-max", "--order", "quadratic"])
    assert out["reports"][0]["argmax_m"] == 1 and out["reports"][0]["family"] == "basis_max"


def test_bound_prints_17_digits(data, capsys):
    assert main(["bound", "--input", str(data), "--x", "0", "--y", "1", "--z", "2", "--method", "quad"]) == 0
    out = capsys.readouterr().out
    assert "quad" in out and "0.2500000000000" in out
    assert any(len(tok.replace("-", "").replace(".", "").lstrip("0")) == 17 for tok in out.split()
               if tok[:1].isdigit() and "e" not in tok)


@pytest.mark.parametrize("argv", [
    ["bound", "--input", "missing.json", "--x", "0", "--y", "1", "--method", "quad", "--z", "0"],
    ["bound", "--x", "0"],
    ["nonsense"],
    ["metrics", "--pairs", "--kind", "dp"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_input_errors_exit_2(tmp_path, data, capsys):
    assert main(["bound", "--input", str(data), "--x", "0", "--y", "9", "--method", "quad", "--z", "1"]) == 2
    assert main(["bound", "--input", str(data), "--x", "0", "--y", "1", "--method", "quad"]) == 2
    assert main(["bound", "--input", str(data), "--x", "0", "--y", "1", "--e", "4", "--method", "rs"]) == 2
    assert main(["bound", "--input", str(data), "--x", "0", "--y", "1", "--e", "0", "--method", "detp",
                 "--p", "1.5"]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("re0,im0\n1,0\n1\n")
    assert main(["metrics", "--input", str(bad), "--pairs", "--kind", "psi"]) == 2
    assert "line 3" in capsys.readouterr().err


def test_bound_e_normalized_on_request(tmp_path, data):
    code, out = _json(tmp_path, ["bound", "--input", str(data), "--x", "0", "--y", "1", "--e", "4",
                                 "--method", "rs", "--normalize-e"])
    assert code == 0


def test_metrics_pairs(tmp_path, data):
    code, out = _json(tmp_path, ["metrics", "--input", str(data), "--pairs", "--kind", "dp", "--p", "2"])
    assert code == 0
    assert len(out["pairs"]) == 10
    first = out["pairs"][0]
    assert (first["i"], first["j"], first["value"]) == (0, 1, 1.0)
    by_pair = {(r["i"], r["j"]): r["value"] for r in out["pairs"]}
    assert by_pair[(0, 2)] == pytest.approx(S)
    assert by_pair[(0, 3)] <= 1e-12


def test_metrics_triples(tmp_path, data):
    for kind in ("lin_psi", "krein", "wz_sin_psi", "sin_phi", "dp", "deltap", "cos_lower"):
        code, out = _json(tmp_path, ["metrics", "--input", str(data), "--triples", "--kind", kind,
                                     "--p", "3"])
        assert code == 0 and len(out["triples"]) == 10
        assert all(r["satisfied"] for r in out["triples"])


def test_index_commands(tmp_path, data):
    idx = tmp_path / "idx.json"
    assert main(["index", "build", "--input", str(data), "--p", "2", "--out", str(idx)]) == 0
    q = tmp_path / "q.csv"
    write_vectors(q, [CVector([5, 0]), CVector([0, 1j])])
    code, out = _json(tmp_path, ["index", "nn", "--index", str(idx), "--query", str(q), "--k", "2"])
    assert code == 0
    assert [h["id"] for h in out["results"][0]] == [0, 3]
    assert out["results"][1][0]["id"] == 1
    code, out = _json(tmp_path, ["index", "range", "--index", str(idx), "--query", str(q), "--r", "1"])
    assert code == 0 and all(len(hits) == 5 for hits in out["results"])
    assert main(["index", "range", "--index", str(idx), "--query", str(q), "--r", "2"]) == 2
    assert main(["index", "nn", "--index", str(q), "--query", str(q)]) == 2


def test_check_command(tmp_path, monkeypatch):
    monkeypatch.setenv("SCHWARZKIT_THREADS", "1")
    code, out = _json(tmp_path, ["check", "--dims", "1,2", "--trials", "100", "--seed", "3",
                                 "--p", "2,10", "--field", "real"])
    assert code == 0
    assert out["summary"]["passed"] and out["config"]["scalar_field"] == "real"
    assert main(["check", "--dims", "2", "--trials", "0"]) == 2
    assert main(["check", "--dims", "2", "--trials", "5", "--p", "1"]) == 2


def test_check_exit_1_on_confirmed_violation(tmp_path):
    # run in a subprocess so the injected family does not leak into other tests
    code = """
import sys
from schwarzkit.harness import families, plain, suite
from schwarzkit.cli import main
real = families.family_table
def sides(b):
    l, r, s = families.schwarz_sides(b.X, b.Y)
    return r, l, s
def flipped(x, y):
    l, r, s = plain.schwarz(x, y)
    return r, l, s
suite.family_table = lambda ps: real(ps) + [families.FamilySpec("flipped", "xy", sides, flipped)]
sys.exit(main(["check", "--dims", "2", "--trials", "20", "--threads", "1"]))
"""
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert proc.returncode == 1, proc.stderr


def test_bound_exit_1_on_violation(tmp_path):
    # a basis accepted by the looser Gram check but long enough to overshoot ||x|| ||y||
    path = tmp_path / "p.json"
    write_vectors(path, [CVector([1, 0]), CVector([1 + 5e-9, 0])])
    code, out = _json(tmp_path, ["bound", "--input", str(path), "--x", "0", "--y", "0",
                                 "--method", "projection", "--projector", "1"])
    assert code == 1 and not out["reports"][0]["satisfied"]


def test_module_entry_point(data):
    proc = subprocess.run([sys.executable, "-m", "schwarzkit", "metrics", "--input", str(data),
                           "--pairs", "--kind", "psi"], capture_output=True, text=True)
    assert proc.returncode == 0 and "psi" in proc.stdout
