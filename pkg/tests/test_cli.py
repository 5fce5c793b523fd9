import csv
import io
import json
import os
import subprocess
import sys

import pytest

import lfid.parallel as parallel
from lfid.cli import run_cli

TRIANGLE = "A B 1\nB C 1\nC A 1\n"


@pytest.fixture
def tri_file(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text(TRIANGLE)
    return str(p)


def _rows(text):
    return list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))


def test_compute_to_stdout(tri_file, capsys):
    assert run_cli(["compute", "--topo", tri_file]) == 0
    rows = _rows(capsys.readouterr().out)
    # two entries for each of the six (node, dest) pairs
    assert len(rows) == 12
    assert {"node": "A", "dest": "B", "nexthop": "B", "cost_milli": "1000", "kind": "DW"} in rows
    assert {"node": "A", "dest": "B", "nexthop": "C", "cost_milli": "2000", "kind": "UW"} in rows


def test_compute_json(tri_file, capsys):
    assert run_cli(["compute", "--topo", tri_file, "--algo", "dw", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["rows"]) == 6


def test_verify_ok(capsys):
    assert run_cli(["verify", "--topo", "abilene", "--algo", "lfid,dw,dwe,ecmp"]) == 0
    out = capsys.readouterr().out
    assert "lfid loop_free: 11/11 destinations" in out
    assert out.count("11/11") == 4


def test_verify_full_classification_still_loop_free(capsys):
    assert run_cli(["compute", "--topo", "abilene", "--classification", "full"]) == 0


def test_missing_file_exit_1(tmp_path, capsys):
    assert run_cli(["compute", "--topo", str(tmp_path / "none.txt")]) == 1
    assert "not found" in capsys.readouterr().err


def test_parse_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("A B 1\nC C 1\n")
    assert run_cli(["compute", "--topo", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["paths", "--topo", "abilene", "--algo", "bogus"],
    ["multi-failure", "--topo", "abilene", "--k", "0"],
    ["compute", "--topo", "abilene", "--workers", "0"],
    ["compute", "--topo", "abilene", "--algo", "opt"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_1(argv):
    assert run_cli(argv) == 1


def test_no_partial_file_on_error(tmp_path):
    out = tmp_path / "out.csv"
    assert run_cli(["compute", "--topo", str(tmp_path / "none"), "-o", str(out)]) == 1
    assert not out.exists()
    assert os.listdir(tmp_path) == []


def test_output_file_written(tmp_path, tri_file):
    out = tmp_path / "fib.csv"
    assert run_cli(["compute", "--topo", tri_file, "-o", str(out)]) == 0
    assert out.read_text().startswith("node,dest,nexthop")
    assert sorted(os.listdir(tmp_path)) == ["fib.csv", "tri.txt"]


def test_single_failure_summary(capsys):
    assert run_cli(["single-failure", "--topo", "abilene", "--algo", "dw,lfid,opt", "--summary"]) == 0
    rows = {r["algorithm"]: r for r in _rows(capsys.readouterr().out)}
    assert float(rows["lfid"]["protection"]) == 1.0
    assert float(rows["opt"]["protection"]) == 1.0


def test_unimplemented_tokens_noted(capsys):
    assert run_cli(["paths", "--topo", "abilene", "--algo", "mara-mc,lfid", "--k", "2"]) == 0
    out = capsys.readouterr().out
    assert "# mara-mc: unimplemented" in out
    assert {r["algorithm"] for r in _rows(out)} == {"lfid"}


def test_multi_failure_rows(tri_file, capsys):
    assert run_cli(["multi-failure", "--topo", tri_file, "--algo", "lfid",
                    "--k", "2", "--runs", "2", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "# seed=3" in out and "# rng=" in out and "# topology_sha256=" in out
    rows = _rows(out)
    # every chain survives the first failure on a triangle and dies on the second
    assert sum(r["k"] == "1" and r["recovered"] == "1" for r in rows) == 12
    assert sum(r["k"] == "2" and r["recovered"] == "0" for r in rows) == 12


def test_multi_failure_byte_identical(tmp_path, monkeypatch):
    monkeypatch.setattr(parallel, "available_cpus", lambda: 4)
    outs = []
    for i, workers in enumerate(["1", "1", "4"]):
        path = tmp_path / f"run{i}.csv"
        assert run_cli(["multi-failure", "--topo", "abilene", "--k", "3", "--runs", "5",
                        "--seed", "7", "--workers", workers, "-o", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_bench(capsys):
    assert run_cli(["bench", "--topo", "abilene", "abilene-distance", "--algo", "dw,lfid",
                    "--repetitions", "1"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 4


def test_verify_exit_2_on_loop(monkeypatch, capsys):
    from lfid import cli
    from lfid.fib import AllNodeFib, NexthopEntry

    def looping(token, topology, workers=1):
        fib = AllNodeFib(topology.n)
        fib.set_entries(1, 0, [NexthopEntry(2, 1)])
        fib.set_entries(2, 0, [NexthopEntry(3, 1)])
        fib.set_entries(3, 0, [NexthopEntry(1, 1)])
        return fib

    monkeypatch.setattr(cli, "compute_fib", looping)
    assert run_cli(["verify", "--topo", "abilene"]) == 2
    assert "counterexample" in capsys.readouterr().out


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "lfid.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "lfid" in proc.stdout
