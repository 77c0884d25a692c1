import csv
import io
import json

import pytest

from paleyclique.cli import main
from paleyclique.store import STORE_VERSION, ResultsStore


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_field():
    code, out, _ = run("field", "5", "3")
    assert code == 0
    d = json.loads(out)
    assert d["q"] == 125 and d["modulus"] == [1, 1, 0, 1]


def test_qr():
    code, out, _ = run("qr", "13")
    assert code == 0 and json.loads(out) == [1, 3, 4, 9, 10, 12]


def test_omega_exact_and_store(tmp_path):
    store = tmp_path / "s.csv"
    code, out, _ = run("--store", str(store), "omega", "125")
    assert code == 0
    assert "omega(P_125) = 7 (exact)" in out
    run("--store", str(store), "omega", "125")
    rows = ResultsStore(store).rows()
    assert len(rows) == 1 and rows[0].exact and rows[0].omega == 7
    assert store.read_text().splitlines()[0] == STORE_VERSION


def test_omega_json_and_heuristic():
    code, out, _ = run("omega", "13", "--format", "json", "--no-store")
    d = json.loads(out)
    assert code == 0 and d["omega"] == 3 and d["exact"] is True
    code, out, _ = run("omega", "3125", "--heuristic", "--seed", "2", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["exact"] is False and d["method"] == "greedy(seed=2)"


def test_inexact_row_never_replaces_exact(tmp_path):
    store = ResultsStore(tmp_path / "s.csv")
    assert store.record(13, 13, 1, 3, True, "branch-and-bound", [0, 1, 4])
    assert not store.record(13, 13, 1, 2, False, "greedy", [0, 1])
    assert store.lookup(13).exact


def test_env_store(tmp_path, monkeypatch):
    path = tmp_path / "env.csv"
    monkeypatch.setenv("PALEY_STORE", str(path))
    run("omega", "29")
    assert ResultsStore(path).lookup(29).omega == 4


def test_bounds_csv():
    code, out, _ = run("bounds", "13", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    pairs = {(r[3], r[4]) for r in rows[1:]}
    assert code == 0 and ("hp", "3") in pairs and ("omega", "3") in pairs


def test_bounds_table_and_json():
    code, out, _ = run("bounds", "125")
    assert code == 0 and "main" in out and "omega" in out
    code, out, _ = run("bounds", "--sweep", "5", "30", "--format", "json")
    qs = [d["q"] for d in json.loads(out)]
    assert qs == [5, 9, 13, 17, 25, 29]


def test_bounds_uses_store(tmp_path):
    store = tmp_path / "s.csv"
    ResultsStore(store).record(3125, 5, 5, 99, True, "test fixture", [0])
    code, out, _ = run("--store", str(store), "bounds", "3125", "--format", "json")
    d = json.loads(out)[0]
    assert d["omega_exact"] == 99 and d["omega_source"] == "results store"


def test_certify_and_verify(tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = run("certify", "13", "--clique", "0,1,4", "--n", "3", "--out", str(path))
    assert code == 0
    assert "6 ≤ 6" in out
    code, out, _ = run("verify-cert", str(path))
    assert code == 0 and out.strip().endswith("OK")
    code, out, _ = run("verify-cert", str(path), "--format", "json")
    assert json.loads(out)["ok"] is True


def test_verify_tampered(tmp_path):
    path = tmp_path / "cert.json"
    run("certify", "13", "--clique", "0,1,4", "--n", "3", "--out", str(path))
    d = json.loads(path.read_text())
    d["coefficients"][1] = 5
    path.write_text(json.dumps(d))
    code, out, _ = run("verify-cert", str(path))
    assert code == 1 and "FAIL system_F" in out


def test_scan():
    code, out, _ = run("scan-conjecture", "13", "--n", "3", "--clique", "0,1,4")
    assert code == 0 and "|M| = 4" in out
    code, out, _ = run("scan-conjecture", "125", "--n", "3", "--greedy", "0", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["n"] == 3 and d["clique"]["q"] == 125


@pytest.mark.parametrize("argv, code, error", [
    (["omega", "7"], 1, "BadCongruence"),
    (["bounds", "12"], 1, "BadCongruence"),
    (["field", "4", "2"], 1, "NotPrime"),
    (["certify", "13", "--clique", "0,1,2", "--n", "3"], 1, "NotAClique"),
    (["certify", "13", "--clique", "0,1,4", "--n", "5"], 1, "NOutOfRange"),
    (["scan-conjecture", "13", "--n", "3", "--strict"], 1, "BadForm"),
])
def test_domain_errors(argv, code, error):
    rc, _, err = run(*argv)
    assert rc == code
    assert json.loads(err)["error"] == error


@pytest.mark.parametrize("argv", [[], ["nosuch"], ["omega"], ["certify", "13", "--n", "3"],
                                  ["omega", "x"], ["bounds"]])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2
