"""Benchmark drivers for the four experiment families.

Each driver runs its self-checks before any row is returned, so a table with
timings is never produced from a wrong answer. Timings are best-of-``reps`` on
a monotonic clock and are informational only.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from .circuit import Circuit, execute, execute_on_backend
from .dense import MAX_QUBITS, DenseState
from .dynamics import DENSE_CAP as XYZ_DENSE_CAP
from .dynamics import TrotterPlan, XyzParams, evolve
from .errors import CapabilityError, CorrectnessError, InputError, NumericalError
from .gates import validation
from .mps import MpsConfig, MpsState
from .observables import PauliObservable, h2_hamiltonian
from .qft import inverse_qft_circuit, inverse_qft_dense_fft, qft_circuit, qft_dense_fft
from .variational import (
    DEFAULT_SEED,
    VqeConfig,
    edge_case_circuit,
    edge_case_observable,
    hardware_efficient_ansatz,
    parameter_shift_gradient,
    vqe_run,
)

EXPERIMENTS = ("qft", "vqe-h2", "xyz", "grad-edge")
BACKENDS = ("dense", "mps", "auto")
#: ``auto`` runs dense up to and including this width, MPS above it.
AUTO_THRESHOLD = 12
ROUND_TRIP_TOL = 1e-10
CHEMICAL_ACCURACY = 1.6e-3

COLUMNS = {
    "qft": ("n", "backend", "wall_time", "peak_memory_estimate", "max_bond_dim"),
    "vqe-h2": ("num_params", "final_energy", "abs_error_vs_exact_diag", "iterations", "wall_time"),
    "xyz": ("N", "backend", "E_initial", "E_final", "delta_E", "wall_time", "peak_bond_dim"),
    "grad-edge": ("case", "g0", "g1", "g2", "g3", "nan_detected", "pass"),
}

_DEFAULT_QUBITS = {"qft": (1, 16), "xyz": (4, 12), "vqe-h2": (4, 4), "grad-edge": (2, 2)}
_DEFAULT_MPS = {"qft": MpsConfig(64, 1e-8), "xyz": MpsConfig(32, 1e-8)}


@dataclass(frozen=True)
class EdgeCase:
    name: str
    theta: tuple[float, float, float, float]
    expected: tuple[float, float, float, float]
    tol: float = 1e-4


#: Reference gradients of ``<Z0>`` for the two-qubit edge-case circuit.
EDGE_CASES = (
    EdgeCase("normal", (0.5, 0.3, 0.2, 0.1), (-0.4808, -0.0053, -0.0069, -0.0101)),
    EdgeCase("large", (10.0, 5.0, 3.0, 2.0), (0.1072, 0.6889, 0.2348, 0.5258)),
    EdgeCase("near_zero", (1e-8, 1e-7, 1e-6, 1e-5), (-1.0e-8, 0.0, 0.0, 0.0), tol=1e-6),
    EdgeCase("pi_over_2", (math.pi / 2,) * 4, (-0.5, -0.5, 0.0, 0.0)),
    EdgeCase("pi", (math.pi,) * 4, (0.0, 0.0, 0.0, 0.0)),
)


@dataclass(frozen=True)
class BenchConfig:
    experiment: str
    qubits: tuple[int, int] | None = None
    backend: str = "auto"
    max_bond_dim: int | None = None
    trunc_eps: float | None = None
    steps: int = 100
    time: float = 1.0
    layers: tuple[int, int] = (3, 10)
    seed: int = DEFAULT_SEED
    reps: int = 1
    max_iter: int = 350
    hamiltonian: str | None = None

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise InputError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.backend not in BACKENDS:
            raise InputError(f"unknown backend {self.backend!r}; choose from {BACKENDS}")
        lo, hi = self.qubit_range
        if lo < 1 or hi < lo:
            raise InputError(f"empty or invalid qubit range {lo}..{hi}")
        l_lo, l_hi = self.layers
        if l_lo < 1 or l_hi < l_lo:
            raise InputError(f"empty or invalid layer range {l_lo}..{l_hi}")
        if self.reps < 1:
            raise InputError(f"reps must be >= 1, got {self.reps}")
        if self.steps < 0:
            raise InputError(f"steps must be >= 0, got {self.steps}")
        if self.steps > 0 and not self.time > 0:
            raise InputError(f"time must be positive, got {self.time}")
        if self.max_iter < 1:
            raise InputError(f"max_iter must be >= 1, got {self.max_iter}")
        self.mps_config  # validates overrides

    @property
    def qubit_range(self) -> tuple[int, int]:
        return self.qubits if self.qubits is not None else _DEFAULT_QUBITS[self.experiment]

    @property
    def mps_config(self) -> MpsConfig:
        base = _DEFAULT_MPS.get(self.experiment, MpsConfig())
        return MpsConfig(
            self.max_bond_dim if self.max_bond_dim is not None else base.max_bond_dim,
            self.trunc_eps if self.trunc_eps is not None else base.truncation_threshold,
        )


@dataclass
class BenchResult:
    experiment: str
    columns: tuple[str, ...]
    rows: list[dict[str, Any]] = field(default_factory=list)
    #: Row-level self-check failures (only grad-edge reports failures this way).
    failures: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(row[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [{c: _json_value(row[c]) for c in self.columns} for row in self.rows]
        doc = {"experiment": self.experiment, "version": __version__, "columns": list(self.columns), "rows": rows}
        return json.dumps(doc, indent=2) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def choose_backend(n: int, backend: str, dense_cap: int) -> str:
    """Resolve ``auto`` and refuse dense widths above ``dense_cap``."""
    if backend == "auto":
        backend = "dense" if n <= AUTO_THRESHOLD else "mps"
    if backend == "dense" and n > dense_cap:
        raise CapabilityError(f"dense backend is capped at {dense_cap} qubits, requested {n}")
    return backend


def best_of(reps: int, fn: Callable[[], Any]) -> tuple[float, Any]:
    """Run ``fn`` ``reps`` times; return the shortest wall time and the last result."""
    best = math.inf
    out = None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def mps_memory_bound(num_qubits: int, chi: int) -> int:
    """Bytes for an MPS whose bonds are all at ``min(chi, 2**k, 2**(n-k))``."""
    dims = [1] + [min(chi, 2 ** min(k, num_qubits - k)) for k in range(1, num_qubits)] + [1]
    return 16 * sum(dims[i] * 2 * dims[i + 1] for i in range(num_qubits))


def _product_prep(n: int, seed: int) -> Circuit:
    rng = np.random.default_rng([seed, n])
    c = Circuit(n)
    for q in range(n):
        c.ry(q, float(rng.uniform(0.0, math.pi)))
        c.rz(q, float(rng.uniform(0.0, 2.0 * math.pi)))
    return c


# ---------------------------------------------------------------------------
# experiments


def run_qft_bench(config: BenchConfig) -> BenchResult:
    """QFT of a seeded random product state for each width in the range.

    Dense rows time the FFT path; MPS rows time the gate circuit. Every row is
    checked by an inverse-QFT round trip. On MPS the tolerance is widened by the
    rigorous truncation bound ``1 - cos(angle)`` (zero when nothing was cut).
    """
    lo, hi = config.qubit_range
    result = BenchResult("qft", COLUMNS["qft"])
    mps_cfg = config.mps_config
    for n in range(lo, hi + 1):
        backend = choose_backend(n, config.backend, MAX_QUBITS)
        prep = _product_prep(n, config.seed)
        if backend == "dense":
            ref = DenseState.zero_state(n)
            execute(prep, ref)

            def run() -> DenseState:
                s = ref.copy()
                qft_dense_fft(s)
                return s

            wall, out = best_of(config.reps, run)
            inverse_qft_dense_fft(out)
            err = float(np.max(np.abs(out.amplitudes - ref.amplitudes)))
            if err > ROUND_TRIP_TOL:
                raise CorrectnessError(f"QFT round trip at n={n} (dense) off by {err:.3e}")
            memory, bond = ref.memory_estimate(), 1
        else:
            mref = MpsState.zero_state(n, mps_cfg)
            execute_on_backend(prep, mref)
            forward = qft_circuit(n)

            def run() -> MpsState:
                s = mref.copy()
                execute_on_backend(forward, s)
                return s

            wall, out = best_of(config.reps, run)
            bond = out.peak_bond_dim
            execute_on_backend(inverse_qft_circuit(n), out)
            infidelity = 1.0 - abs(mref.inner(out))
            allowed = ROUND_TRIP_TOL + 1.0 - math.cos(min(out.truncation_angle, math.pi / 2))
            if not infidelity <= allowed:
                raise CorrectnessError(
                    f"QFT round trip at n={n} (mps) has infidelity {infidelity:.3e} > {allowed:.3e}"
                )
            memory = mps_memory_bound(n, bond)
        result.rows.append(
            {"n": n, "backend": backend, "wall_time": wall, "peak_memory_estimate": memory, "max_bond_dim": bond}
        )
    return result


def run_vqe_h2(config: BenchConfig) -> BenchResult:
    """VQE layer sweep on the hardware-efficient ansatz against exact diagonalization."""
    if config.hamiltonian is None:
        ham = h2_hamiltonian()
    else:
        ham = PauliObservable.load(config.hamiltonian)
    exact = ham.ground_energy()
    vqe_cfg = VqeConfig(max_iter=config.max_iter, seed=config.seed)
    result = BenchResult("vqe-h2", COLUMNS["vqe-h2"])
    lo, hi = config.layers
    for layers in range(lo, hi + 1):
        ansatz = hardware_efficient_ansatz(ham.num_qubits, layers)
        wall, res = best_of(config.reps, lambda: vqe_run(ansatz, ham, config=vqe_cfg))
        if res.energy < exact - 1e-9:
            raise CorrectnessError(
                f"VQE energy {res.energy:.12f} lies below the exact ground energy {exact:.12f}"
            )
        if res.iterations > config.max_iter:
            raise CorrectnessError(f"VQE ran {res.iterations} iterations, limit {config.max_iter}")
        result.rows.append(
            {
                "num_params": ansatz.num_params,
                "final_energy": res.energy,
                "abs_error_vs_exact_diag": abs(res.energy - exact),
                "iterations": res.iterations,
                "wall_time": wall,
            }
        )
    return result


def run_xyz(config: BenchConfig) -> BenchResult:
    """Driven XYZ chain (``J = 1``, ``A = 2``, ``omega = 1``) evolved from ``|1...1>``."""
    lo, hi = config.qubit_range
    if lo < 2:
        raise InputError("the XYZ chain needs at least 2 sites")
    mps_cfg = config.mps_config
    plan = TrotterPlan(config.time, config.steps) if config.steps > 0 else None
    result = BenchResult("xyz", COLUMNS["xyz"])
    for n in range(lo, hi + 1):
        backend = choose_backend(n, config.backend, XYZ_DENSE_CAP)
        params = XyzParams(n)
        record_every = config.steps if config.steps > 0 else 1
        wall, ev = best_of(config.reps, lambda: evolve(params, plan, backend, mps_cfg, record_every))
        _check_xyz(params, ev, backend, mps_cfg)
        result.rows.append(
            {
                "N": n,
                "backend": backend,
                "E_initial": ev.initial_energy,
                "E_final": ev.final_energy,
                "delta_E": ev.delta_energy,
                "wall_time": wall,
                "peak_bond_dim": ev.peak_bond_dim,
            }
        )
    return result


def _check_xyz(params: XyzParams, ev, backend: str, mps_cfg: MpsConfig) -> None:
    # |1...1> at t = 0: only the ZZ bonds contribute, each <ZZ> = +1
    e0 = -params.jz * (params.num_qubits - 1)
    if abs(ev.initial_energy - e0) > 1e-10:
        raise CorrectnessError(f"initial energy {ev.initial_energy!r} != {e0!r}")
    norm_tol = 1e-10 if backend == "dense" else 1e-8
    norm = ev.final_state.norm()
    if abs(norm - 1.0) > norm_tol:
        raise CorrectnessError(f"norm drifted to {norm!r} on {backend}")
    if ev.peak_bond_dim > mps_cfg.max_bond_dim and backend == "mps":
        raise CorrectnessError(f"bond dimension {ev.peak_bond_dim} exceeds cap {mps_cfg.max_bond_dim}")


def edge_case_gradients(case: EdgeCase) -> tuple[list[float], bool]:
    """PSR gradient for one edge case and whether any component is NaN/Inf."""
    try:
        g = parameter_shift_gradient(edge_case_circuit(), edge_case_observable(), case.theta)
    except NumericalError:
        return [math.nan] * 4, True
    values = [float(x) for x in g]
    return values, not all(math.isfinite(x) for x in values)


def run_grad_edge(config: BenchConfig) -> BenchResult:
    """Five fixed parameter regimes; every row is emitted, failures are flagged."""
    result = BenchResult("grad-edge", COLUMNS["grad-edge"])
    for case in EDGE_CASES:
        g, bad = edge_case_gradients(case)
        ok = not bad and max(abs(a - b) for a, b in zip(g, case.expected)) <= case.tol
        result.rows.append(
            {"case": case.name, "g0": g[0], "g1": g[1], "g2": g[2], "g3": g[3], "nan_detected": bad, "pass": ok}
        )
        if not ok:
            result.failures.append(f"{case.name}: got {g}, expected {list(case.expected)}")
    return result


RUNNERS: dict[str, Callable[[BenchConfig], BenchResult]] = {
    "qft": run_qft_bench,
    "vqe-h2": run_vqe_h2,
    "xyz": run_xyz,
    "grad-edge": run_grad_edge,
}


def run(config: BenchConfig) -> BenchResult:
    """Run one experiment with gate-matrix validation switched off."""
    with validation(False):
        return RUNNERS[config.experiment](config)


def parse_range(text: str) -> tuple[int, int]:
    """``"A..B"`` or ``"A"`` to an inclusive integer pair."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            v = int(parts[0])
            return v, v
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise InputError(f"expected A..B or a single integer, got {text!r}")


def write(result: BenchResult, fmt: str, out: str | os.PathLike | None = None) -> str:
    """Render ``result`` and write it to ``out`` when given; returns the text."""
    text = result.to_csv() if fmt == "csv" else result.to_json()
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
