"""Parameterized circuits, gradients, optimizers and the VQE driver.

Every objective evaluation calls the circuit builder again with the exact
parameter vector it needs and runs the result on a fresh ``|0...0>`` state, so
shifted evaluations never share state with each other.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from .circuit import Circuit, execute, execute_on_backend
from .dense import DenseState
from .errors import DimensionError, InputError, OptimizerError
from .mps import MpsConfig, MpsState
from .observables import PauliObservable, expectation, z_on

#: Seed used when no initial parameters are given.
DEFAULT_SEED = 7


class ParameterizedCircuit:
    """A pure map from a parameter vector to a freshly built :class:`Circuit`."""

    def __init__(self, num_qubits: int, num_params: int, builder: Callable[[Sequence[float]], Circuit]) -> None:
        if num_qubits < 1 or num_params < 0:
            raise InputError(f"bad sizes: num_qubits={num_qubits}, num_params={num_params}")
        self.num_qubits = num_qubits
        self.num_params = num_params
        self._builder = builder

    def build(self, params: Sequence[float]) -> Circuit:
        theta = _as_params(params, self.num_params)
        circuit = self._builder(theta)
        if circuit.num_qubits != self.num_qubits:
            raise DimensionError(f"builder returned a {circuit.num_qubits}-qubit circuit, expected {self.num_qubits}")
        return circuit

    def prepare(self, params: Sequence[float], backend: MpsConfig | None = None) -> DenseState | MpsState:
        """Build the circuit and run it on a new zero state (dense, or MPS when a config is given)."""
        circuit = self.build(params)
        if backend is None:
            state = DenseState.zero_state(self.num_qubits)
            execute(circuit, state)
        else:
            state = MpsState.zero_state(self.num_qubits, backend)
            execute_on_backend(circuit, state)
        return state

    def __repr__(self) -> str:
        return f"ParameterizedCircuit(num_qubits={self.num_qubits}, num_params={self.num_params})"


def _as_params(params: Sequence[float], expected: int) -> NDArray[np.float64]:
    theta = np.array(params, dtype=np.float64).reshape(-1)
    if theta.shape[0] != expected:
        raise DimensionError(f"expected {expected} parameters, got {theta.shape[0]}")
    if not np.all(np.isfinite(theta)):
        raise InputError(f"non-finite parameter(s) at index {np.flatnonzero(~np.isfinite(theta)).tolist()}")
    return theta


def energy(
    pc: ParameterizedCircuit,
    observable: PauliObservable,
    params: Sequence[float],
    backend: MpsConfig | None = None,
) -> float:
    return expectation(observable, pc.prepare(params, backend))


#: Gate kinds whose generator spectrum has gaps 1/2 and 1 (a controlled Pauli
#: rotation); the two-term rule is not exact for them.
CONTROLLED_ROTATIONS = frozenset({"CRY"})
# four-term rule for controlled rotations, shifts pi/2 and 3pi/2
_D_PLUS = (math.sqrt(2) + 1) / (4 * math.sqrt(2))
_D_MINUS = (math.sqrt(2) - 1) / (4 * math.sqrt(2))


def _map(fn: Callable[[int], float], n: int, workers: int | None) -> NDArray[np.float64]:
    if workers and workers > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(fn, range(n)))
    else:
        out = [fn(i) for i in range(n)]
    return np.array(out, dtype=np.float64)


def _shifted(pc, observable, theta, i: int, step: float, backend) -> float:
    t = theta.copy()
    t[i] += step
    return energy(pc, observable, t, backend)


def parameter_gate_kinds(pc: ParameterizedCircuit, params: Sequence[float]) -> list[frozenset[str]]:
    """Names of the gates each parameter feeds, found by perturbing one component at a time."""
    theta = _as_params(params, pc.num_params)
    base = pc.build(theta).operations
    kinds = []
    for i in range(pc.num_params):
        probe = theta.copy()
        probe[i] += 0.5
        ops = pc.build(probe).operations
        if len(ops) != len(base):
            kinds.append(frozenset(op.name for op in ops))
            continue
        kinds.append(frozenset(a.name for a, b in zip(ops, base) if a.parameter != b.parameter))
    return kinds


def parameter_shift_gradient(
    pc: ParameterizedCircuit,
    observable: PauliObservable,
    params: Sequence[float],
    shift: float = math.pi / 2,
    *,
    backend: MpsConfig | None = None,
    workers: int | None = None,
) -> NDArray[np.float64]:
    """Exact gradient from shifted circuit evaluations.

    Parameters feeding an ``exp(-i t G / 2)`` gate with ``G**2 = I`` (RX, RY, RZ,
    RXX, RYY, RZZ, and the phase gates up to a global phase) use the two-term rule
    ``[f(t + s) - f(t - s)] / (2 sin s)``. Parameters feeding a controlled
    rotation use the four-term rule with shifts ``pi/2`` and ``3 pi/2``, since
    their expectation carries both half and full frequencies.

    Every evaluation builds a fresh circuit on a fresh state. With
    ``workers > 1`` components run on a thread pool and are assembled in
    parameter order, giving the same result as a serial run.

    Raises:
        InputError: ``sin(shift)`` is zero, or the parameters are not finite.
    """
    theta = _as_params(params, pc.num_params)
    denom = 2.0 * math.sin(shift)
    if abs(denom) < 1e-12:
        raise InputError(f"shift {shift!r} is a multiple of pi")
    four_term = [bool(k & CONTROLLED_ROTATIONS) for k in parameter_gate_kinds(pc, theta)]

    def component(i: int) -> float:
        def f(step: float) -> float:
            return _shifted(pc, observable, theta, i, step, backend)

        if four_term[i]:
            a, b = math.pi / 2, 3 * math.pi / 2
            return _D_PLUS * (f(a) - f(-a)) - _D_MINUS * (f(b) - f(-b))
        return (f(shift) - f(-shift)) / denom

    return _map(component, pc.num_params, workers)


def finite_difference_gradient(
    pc: ParameterizedCircuit,
    observable: PauliObservable,
    params: Sequence[float],
    h: float = 1e-5,
    *,
    backend: MpsConfig | None = None,
) -> NDArray[np.float64]:
    """Central differences ``[f(t + h e_i) - f(t - h e_i)] / 2h``."""
    if not h > 0:
        raise InputError(f"step must be positive, got {h}")
    theta = _as_params(params, pc.num_params)

    def component(i: int) -> float:
        return (_shifted(pc, observable, theta, i, h, backend) - _shifted(pc, observable, theta, i, -h, backend)) / (2 * h)

    return _map(component, pc.num_params, None)


def edge_case_circuit() -> ParameterizedCircuit:
    """Two-qubit, four-parameter circuit used for gradient robustness checks.

    RX(t0) on q0, RY(t1) on q1, RZ(t2) on q0, CNOT 0->1, then CRY(t3) with q1
    controlling q0. Pair it with :func:`edge_case_observable` (``Z`` on q0).
    """

    def build(t: Sequence[float]) -> Circuit:
        return Circuit(2).rx(0, t[0]).ry(1, t[1]).rz(0, t[2]).cnot(0, 1).cry(1, 0, t[3])

    return ParameterizedCircuit(2, 4, build)


def edge_case_observable() -> PauliObservable:
    return z_on(0, 2)


def hardware_efficient_ansatz(num_qubits: int, num_layers: int) -> ParameterizedCircuit:
    """Layers of RY on every qubit followed by a CNOT chain ``(i, i+1)``."""
    if num_layers < 1:
        raise InputError(f"num_layers must be >= 1, got {num_layers}")

    def build(t: Sequence[float]) -> Circuit:
        c = Circuit(num_qubits)
        k = 0
        for _ in range(num_layers):
            for q in range(num_qubits):
                c.ry(q, t[k])
                k += 1
            for q in range(num_qubits - 1):
                c.cnot(q, q + 1)
        return c

    return ParameterizedCircuit(num_qubits, num_qubits * num_layers, build)


# ---------------------------------------------------------------------------
# optimizers


@dataclass(frozen=True)
class AdamState:
    m: NDArray[np.float64]
    v: NDArray[np.float64]
    t: int = 0
    lr: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def init(cls, num_params: int, lr: float = 1e-2, **kwargs) -> AdamState:
        return cls(np.zeros(num_params), np.zeros(num_params), 0, lr, **kwargs)


def adam_step(
    state: AdamState, params: Sequence[float], grad: Sequence[float]
) -> tuple[NDArray[np.float64], AdamState]:
    """One bias-corrected Adam update. Returns the new parameters and optimizer state."""
    theta = np.asarray(params, dtype=np.float64)
    g = np.asarray(grad, dtype=np.float64)
    if not theta.shape == g.shape == state.m.shape:
        raise DimensionError(f"shape mismatch: params {theta.shape}, grad {g.shape}, moments {state.m.shape}")
    if not np.all(np.isfinite(g)):
        raise OptimizerError(f"non-finite gradient component(s) at {np.flatnonzero(~np.isfinite(g)).tolist()}")
    t = state.t + 1
    m = state.beta1 * state.m + (1 - state.beta1) * g
    v = state.beta2 * state.v + (1 - state.beta2) * g * g
    m_hat = m / (1 - state.beta1**t)
    v_hat = v / (1 - state.beta2**t)
    theta = theta - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return theta, replace(state, m=m, v=v, t=t)


def sgd_step(params: Sequence[float], grad: Sequence[float], lr: float) -> NDArray[np.float64]:
    theta = np.asarray(params, dtype=np.float64)
    g = np.asarray(grad, dtype=np.float64)
    if theta.shape != g.shape:
        raise DimensionError(f"shape mismatch: params {theta.shape}, grad {g.shape}")
    if not np.all(np.isfinite(g)):
        raise OptimizerError("non-finite gradient")
    return theta - lr * g


# ---------------------------------------------------------------------------
# VQE


@dataclass(frozen=True)
class VqeConfig:
    max_iter: int = 350
    tol: float = 1e-7
    lr: float = 1e-2
    seed: int = DEFAULT_SEED
    shift: float = math.pi / 2
    workers: int | None = None


@dataclass
class VqeResult:
    params: NDArray[np.float64]
    energy: float
    energies: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def initial_parameters(num_params: int, seed: int = DEFAULT_SEED) -> NDArray[np.float64]:
    """Deterministic start point, uniform in ``[0, 0.1)``."""
    return np.random.default_rng(seed).uniform(0.0, 0.1, size=num_params)


def vqe_run(
    ansatz: ParameterizedCircuit,
    hamiltonian: PauliObservable,
    initial_params: Sequence[float] | None = None,
    config: VqeConfig = VqeConfig(),
) -> VqeResult:
    """Minimize ``<H>`` with Adam on parameter-shift gradients.

    Stops when two consecutive energies differ by less than ``config.tol`` or
    after ``config.max_iter`` updates. ``energies[0]`` is the starting energy.
    """
    if initial_params is None:
        theta = initial_parameters(ansatz.num_params, config.seed)
    else:
        theta = _as_params(initial_params, ansatz.num_params)
    opt = AdamState.init(ansatz.num_params, lr=config.lr)
    e = energy(ansatz, hamiltonian, theta)
    trace = [e]
    converged = False
    it = 0
    for it in range(1, config.max_iter + 1):
        grad = parameter_shift_gradient(ansatz, hamiltonian, theta, config.shift, workers=config.workers)
        try:
            theta, opt = adam_step(opt, theta, grad)
        except OptimizerError as exc:
            raise OptimizerError(f"iteration {it}: {exc}") from exc
        e_new = energy(ansatz, hamiltonian, theta)
        if not math.isfinite(e_new):
            raise OptimizerError(f"iteration {it}: non-finite energy {e_new}")
        trace.append(e_new)
        if abs(e_new - e) < config.tol:
            converged = True
            e = e_new
            break
        e = e_new
    return VqeResult(theta, e, trace, it, converged)
