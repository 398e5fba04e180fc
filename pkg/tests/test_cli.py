import csv
import io
import json
import subprocess
import sys

import pytest

from trusts.circuits import circuit_to_dict, random_layered_circuit, write_circuit
from trusts import cli
from trusts.cli import main
from trusts.errors import ZeroStateError
from trusts.sparse_state import read_snapshot

TIMING = {"wall_time", "per_gate_time"}


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _json(capsys, *argv):
    code, out = _run(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


class TestRun:
    def test_three_qubit_sequential(self, capsys):
        rep = _json(capsys, "run", "--qubits", "3", "--gates", "5", "--k", "2",
                    "--arch", "sequential", "--seed", "7")
        assert 0 < rep["gamma_sq"] <= 1
        assert rep["gate_count"] == 5 and rep["n_nz"] <= 2

    def test_exact_two_qubits(self, capsys):
        rep = _json(capsys, "run", "--qubits", "2", "--layers", "1", "--k", "4",
                    "--truncation", "none")
        assert rep["gamma_sq"] == 1.0

    def test_circuit_file_twice(self, capsys, tmp_path):
        path = tmp_path / "c.circ"
        write_circuit(random_layered_circuit(10, 4, seed=3), path)
        a = _json(capsys, "run", "--circuit-file", str(path), "--k", "64")
        b = _json(capsys, "run", "--circuit-file", str(path), "--k", "64")
        for key in set(a) - TIMING:
            assert a[key] == b[key], key

    def test_save_and_dump(self, capsys, tmp_path):
        circ, snap, out = tmp_path / "c.circ", tmp_path / "s.json", tmp_path / "r.json"
        assert main(["run", "--qubits", "6", "--layers", "2", "--k", "8", "--save-circuit",
                     str(circ), "--dump-state", str(snap), "--out", str(out), "--fidelity",
                     "--trace"]) == 0
        rep = json.loads(out.read_text())
        state = read_snapshot(snap)
        assert state.n_nz == rep["n_nz"] and state.gamma_sq == rep["gamma_sq"]
        assert 0 < rep["fidelity"] <= 1
        assert len(rep["n_nz_trace"]) == 6
        again = _json(capsys, "run", "--circuit-file", str(circ), "--k", "8")
        assert again["gamma_sq"] == rep["gamma_sq"]

    def test_random_k(self, capsys):
        rep = _json(capsys, "run", "--qubits", "8", "--layers", "3", "--k", "16",
                    "--truncation", "randomk", "--seed", "1")
        assert 0 < rep["gamma_sq"] < 1


class TestExitCodes:
    def test_missing_k(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--qubits", "3"])
        assert exc.value.code == 1

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["simulate"])
        assert exc.value.code == 1

    def test_bad_k(self, capsys):
        assert main(["run", "--qubits", "3", "--layers", "1", "--k", "9"]) == 1

    def test_layers_with_sequential(self, capsys):
        assert main(["run", "--qubits", "3", "--layers", "1", "--k", "2", "--arch",
                     "sequential"]) == 1

    def test_missing_config(self, capsys, tmp_path):
        assert main(["sweep-fidelity", "--config", str(tmp_path / "nope.json")]) == 1

    def test_dense_limit(self, capsys, monkeypatch):
        monkeypatch.setenv("TRUSTS_DENSE_LIMIT", "6")
        assert main(["verify", "--qubits", "8", "--circuits", "1"]) == 3
        assert main(["run", "--qubits", "8", "--k", "4", "--fidelity"]) == 3

    def test_verify_failure(self, capsys):
        assert main(["verify", "--qubits", "6", "--circuits", "2", "--tol", "-1"]) == 2

    def test_collapse(self, capsys, monkeypatch):
        # Unitary gates cannot empty a state from the command line, so stub the command.
        def boom(args):
            raise ZeroStateError("collapsed")

        monkeypatch.setitem(cli.COMMANDS, "run", boom)
        assert main(["run", "--qubits", "2", "--k", "1"]) == 4

    def test_corrupted_circuit_file(self, capsys, tmp_path):
        doc = circuit_to_dict(random_layered_circuit(6, 2, seed=0))
        doc["gates"][2]["matrix"][5] = 3.0
        path = tmp_path / "bad.circ"
        path.write_text(json.dumps(doc))
        assert main(["verify", "--circuit-file", str(path)]) == 1
        assert main(["run", "--circuit-file", str(path), "--k", "4"]) == 1


class TestVerify:
    def test_layered(self, capsys):
        rep = _json(capsys, "verify", "--qubits", "8", "--circuits", "20", "--layers", "5")
        assert rep["passed"] and rep["max_amplitude_error"] <= 1e-10

    def test_sequential(self, capsys):
        rep = _json(capsys, "verify", "--qubits", "10", "--arch", "sequential", "--gates",
                    "100", "--circuits", "2")
        assert rep["passed"]

    def test_circuit_file(self, capsys, tmp_path):
        path = tmp_path / "c.circ"
        write_circuit(random_layered_circuit(7, 3, seed=8), path)
        assert _json(capsys, "verify", "--circuit-file", str(path))["passed"]


class TestSweeps:
    def test_fidelity_csv(self, capsys, tmp_path):
        summary = tmp_path / "s.csv"
        code, out = _run(capsys, "sweep-fidelity", "--qubits", "6", "--d", "1,2^-2",
                         "--layers", "1,2", "--circuits", "3", "--summary", str(summary))
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 2 * 2 * 3
        assert list(rows[0]) == ["N", "L", "k", "d", "policy", "circuit_seed", "gamma_sq",
                                 "fidelity", "f_min", "f_max_numeric", "f_max_pt"]
        assert all(abs(float(r["fidelity"]) - 1) < 1e-10 for r in rows if r["k"] == "64")
        assert len(summary.read_text().splitlines()) == 1 + 4

    def test_fidelity_rerun_identical(self, capsys, tmp_path):
        argv = ["sweep-fidelity", "--qubits", "7", "--k", "2^2,2^5", "--layers", "3",
                "--circuits", "2", "--truncation", "topk,randomk"]
        a = _run(capsys, *argv)[1]
        b = _run(capsys, *argv)[1]
        c = _run(capsys, *argv, "--jobs", "2")[1]
        assert a == b == c

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"qubits": [5], "k_values": [4, 32], "layers": [2],
                                   "circuits_per_point": 2}))
        out = tmp_path / "o.csv"
        assert main(["sweep-fidelity", "--config", str(cfg), "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        assert [r["k"] for r in rows] == ["4", "4", "32", "32"]
        # Flags override the file.
        assert main(["sweep-fidelity", "--config", str(cfg), "--k", "2", "--out", str(out)]) == 0
        assert {r["k"] for r in csv.DictReader(out.open())} == {"2"}

    def test_runtime_csv(self, capsys, tmp_path):
        summary = tmp_path / "s.csv"
        code, out = _run(capsys, "sweep-runtime", "--qubits", "6:8:2", "--k", "1,2^3",
                         "--layers", "2", "--circuits", "2", "--exact", "--repeats", "2",
                         "--summary", str(summary))
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 2 * 3 * 2
        assert list(rows[0]) == ["N", "L", "k", "policy", "circuit_seed", "wall_time", "M",
                                 "per_gate_time"]
        assert {r["k"] for r in rows if r["N"] == "8"} == {"1", "8", "256"}
        assert all(float(r["per_gate_time"]) > 0 for r in rows)

    def test_k_range_syntax(self, capsys):
        code, out = _run(capsys, "sweep-runtime", "--qubits", "6", "--k", "2..4", "--layers",
                         "1", "--circuits", "1")
        assert code == 0
        assert [r["k"] for r in csv.DictReader(io.StringIO(out))] == ["4", "8", "16"]


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "trusts.cli", "run", "--qubits", "4",
                           "--layers", "1", "--k", "4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["num_qubits"] == 4
