from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from qcsim import bench
from qcsim.bench import BenchConfig, EdgeCase, choose_backend, parse_range, run
from qcsim.cli import main
from qcsim.errors import CapabilityError, InputError


def cli(argv: list[str], capsys) -> tuple[int, str, str]:
    try:
        rc = main(argv)
    except SystemExit as exc:  # argparse usage errors
        rc = int(exc.code)
    out, err = capsys.readouterr()
    return rc, out, err


def table(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


# library layer


def test_parse_range():
    assert parse_range("3..7") == (3, 7)
    assert parse_range("5") == (5, 5)
    for bad in ("a..b", "1..2..3", ""):
        with pytest.raises(InputError):
            parse_range(bad)


def test_config_validation():
    with pytest.raises(InputError):
        BenchConfig("nope")
    with pytest.raises(InputError):
        BenchConfig("qft", qubits=(5, 3))
    with pytest.raises(InputError):
        BenchConfig("qft", backend="gpu")
    with pytest.raises(InputError):
        BenchConfig("vqe-h2", layers=(0, 2))
    with pytest.raises(InputError):
        BenchConfig("xyz", steps=-1)


def test_choose_backend():
    assert choose_backend(12, "auto", 26) == "dense"
    assert choose_backend(13, "auto", 26) == "mps"
    assert choose_backend(30, "mps", 26) == "mps"
    with pytest.raises(CapabilityError):
        choose_backend(16, "dense", 15)


def test_qft_dense_rows():
    res = run(BenchConfig("qft", qubits=(1, 10), backend="dense"))
    assert [r["n"] for r in res.rows] == list(range(1, 11))
    assert all(r["backend"] == "dense" and r["max_bond_dim"] == 1 for r in res.rows)
    assert res.rows[-1]["peak_memory_estimate"] == 16 * 2**10


def test_qft_auto_switches_to_mps():
    res = run(BenchConfig("qft", qubits=(12, 14)))
    assert [r["backend"] for r in res.rows] == ["dense", "mps", "mps"]
    assert 1 <= res.rows[-1]["max_bond_dim"] <= 64


def test_qft_mps_forced_small():
    res = run(BenchConfig("qft", qubits=(3, 5), backend="mps"))
    assert all(r["backend"] == "mps" for r in res.rows)


def test_grad_edge_rows():
    res = run(BenchConfig("grad-edge"))
    assert [r["case"] for r in res.rows] == ["normal", "large", "near_zero", "pi_over_2", "pi"]
    assert all(r["pass"] and not r["nan_detected"] for r in res.rows)
    assert not res.failures


def test_vqe_small_run():
    res = run(BenchConfig("vqe-h2", layers=(3, 3), max_iter=20))
    (row,) = res.rows
    assert row["num_params"] == 12
    assert row["iterations"] <= 20
    assert row["abs_error_vs_exact_diag"] >= 0


def test_xyz_zero_steps_gives_initial_energy():
    res = run(BenchConfig("xyz", qubits=(4, 4), steps=0))
    (row,) = res.rows
    assert row["E_initial"] == -3.0 and row["E_final"] == -3.0 and row["delta_E"] == 0.0


def test_xyz_auto_uses_mps_beyond_threshold():
    res = run(BenchConfig("xyz", qubits=(16, 16), steps=3, time=0.1))
    assert res.rows[0]["backend"] == "mps"
    assert res.rows[0]["peak_bond_dim"] <= 32


def test_xyz_backends_agree():
    d = run(BenchConfig("xyz", qubits=(6, 6), backend="dense", steps=50)).rows[0]
    m = run(BenchConfig("xyz", qubits=(6, 6), backend="mps", steps=50)).rows[0]
    assert m["E_final"] == pytest.approx(d["E_final"], abs=1e-4)


def test_xyz_dense_cap():
    with pytest.raises(CapabilityError):
        run(BenchConfig("xyz", qubits=(16, 16), backend="dense", steps=1))


# command line


def test_cli_grad_edge_csv(capsys):
    rc, out, _ = cli(["grad-edge"], capsys)
    assert rc == 0
    rows = table(out)
    assert list(rows[0]) == ["case", "g0", "g1", "g2", "g3", "nan_detected", "pass"]
    assert {r["pass"] for r in rows} == {"true"}


def test_cli_json(capsys):
    rc, out, _ = cli(["qft", "--qubits", "2..3", "--format", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["experiment"] == "qft"
    assert doc["columns"] == ["n", "backend", "wall_time", "peak_memory_estimate", "max_bond_dim"]
    assert [r["n"] for r in doc["rows"]] == [2, 3]


def test_cli_out_file(tmp_path, capsys):
    path = tmp_path / "t.csv"
    rc, out, _ = cli(["xyz", "--qubits", "3..4", "--steps", "0", "--out", str(path)], capsys)
    assert rc == 0 and out == ""
    rows = table(path.read_text())
    assert [float(r["E_initial"]) for r in rows] == [-2.0, -3.0]


def test_cli_is_deterministic(capsys):
    args = ["xyz", "--qubits", "4..5", "--steps", "10"]
    _, a, _ = cli(args, capsys)
    _, b, _ = cli(args, capsys)
    strip = lambda text: [{k: v for k, v in r.items() if k != "wall_time"} for r in table(text)]
    assert strip(a) == strip(b)


def test_cli_config_errors(capsys):
    assert cli(["qft", "--qubits", "x..y"], capsys)[0] == 2
    assert cli(["qft", "--qubits", "5..2"], capsys)[0] == 2
    assert cli(["nope"], capsys)[0] == 2
    assert cli(["vqe-h2", "--hamiltonian", "/nonexistent/h.txt"], capsys)[0] == 2


def test_cli_bad_hamiltonian_reports_line(tmp_path, capsys):
    path = tmp_path / "h.txt"
    path.write_text("0.5 ZZII\n0.1 ZQII\n")
    rc, _, err = cli(["vqe-h2", "--layers", "1..1", "--hamiltonian", str(path)], capsys)
    assert rc == 2
    assert "line 2" in err


def test_cli_capability_error(capsys):
    rc, _, err = cli(["xyz", "--qubits", "16", "--backend", "dense", "--steps", "1"], capsys)
    assert rc == 4
    assert "capped" in err


def test_cli_correctness_failure_still_writes_table(monkeypatch, capsys):
    broken = (EdgeCase("normal", (0.5, 0.3, 0.2, 0.1), (1.0, 1.0, 1.0, 1.0)),) + bench.EDGE_CASES[1:]
    monkeypatch.setattr(bench, "EDGE_CASES", broken)
    rc, out, err = cli(["grad-edge"], capsys)
    assert rc == 3
    rows = table(out)
    assert len(rows) == 5 and rows[0]["pass"] == "false"
    assert "normal" in err


def test_cli_json_nan_becomes_null(monkeypatch, capsys):
    monkeypatch.setattr(bench, "edge_case_gradients", lambda case: ([math.nan] * 4, True))
    rc, out, _ = cli(["grad-edge", "--format", "json"], capsys)
    assert rc == 3
    doc = json.loads(out)
    assert doc["rows"][0]["g0"] is None and doc["rows"][0]["nan_detected"] is True


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qcsim", "xyz", "--qubits", "2", "--steps", "0"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert table(proc.stdout)[0]["E_initial"] == "-1"
