"""Ordered gate container with a chaining builder API and backend dispatch."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

import numpy as np

from .dense import DenseState
from .errors import CapabilityError, DimensionError, GateConstructionError, SizeError
from .gates import Gate, apply_gate, standard_gate


class StateBackend(Protocol):
    """Anything a circuit can run on: :class:`DenseState` or :class:`MpsState`."""

    @property
    def num_qubits(self) -> int: ...

    def apply_single_qubit(self, qubit: int, matrix) -> None: ...

    def apply_two_qubit(self, q_a: int, q_b: int, matrix) -> None: ...

    def apply_full_matrix(self, qubits, matrix) -> None: ...


@dataclass(frozen=True)
class Operation:
    gate: Gate
    qubits: tuple[int, ...]
    name: str

    @property
    def parameter(self) -> float | None:
        return self.gate.parameter


class Circuit:
    """A width plus an ordered list of operations.

    Builder methods validate indices on append and return ``self``::

        c = Circuit(2).h(0).cnot(0, 1)
    """

    def __init__(self, num_qubits: int, noise_models: Sequence[object] = ()) -> None:
        if num_qubits < 1:
            raise SizeError(f"circuit needs at least one qubit, got {num_qubits}")
        self.num_qubits = num_qubits
        self._ops: list[Operation] = []
        # extension point only; no noise channel is implemented
        self.noise_models = tuple(noise_models)

    @property
    def operations(self) -> tuple[Operation, ...]:
        return tuple(self._ops)

    def __len__(self) -> int:
        return len(self._ops)

    def __iter__(self):
        return iter(self._ops)

    def append(self, gate: Gate) -> Circuit:
        for q in gate.qubits:
            if not 0 <= q < self.num_qubits:
                raise GateConstructionError(
                    f"{gate.name} on qubit {q} does not fit a {self.num_qubits}-qubit circuit"
                )
        self._ops.append(Operation(gate, gate.qubits, gate.name))
        return self

    def extend(self, other: Circuit | Iterable[Operation]) -> Circuit:
        for op in other:
            self.append(op.gate)
        return self

    def _add(self, kind: str, qubits: tuple[int, ...], parameter: float | None = None) -> Circuit:
        return self.append(standard_gate(kind, qubits, parameter))

    # fixed gates
    def identity(self, q: int) -> Circuit:
        return self._add("I", (q,))

    def h(self, q: int) -> Circuit:
        return self._add("H", (q,))

    def x(self, q: int) -> Circuit:
        return self._add("X", (q,))

    def y(self, q: int) -> Circuit:
        return self._add("Y", (q,))

    def z(self, q: int) -> Circuit:
        return self._add("Z", (q,))

    def s(self, q: int) -> Circuit:
        return self._add("S", (q,))

    def sdg(self, q: int) -> Circuit:
        return self._add("Sdg", (q,))

    def t(self, q: int) -> Circuit:
        return self._add("T", (q,))

    def tdg(self, q: int) -> Circuit:
        return self._add("Tdg", (q,))

    def cnot(self, control: int, target: int) -> Circuit:
        return self._add("CNOT", (control, target))

    def cz(self, control: int, target: int) -> Circuit:
        return self._add("CZ", (control, target))

    def swap(self, a: int, b: int) -> Circuit:
        return self._add("SWAP", (a, b))

    def toffoli(self, c1: int, c2: int, target: int) -> Circuit:
        return self._add("Toffoli", (c1, c2, target))

    # parameterized gates: the angle is a required positional argument
    def rx(self, q: int, theta: float) -> Circuit:
        return self._add("RX", (q,), theta)

    def ry(self, q: int, theta: float) -> Circuit:
        return self._add("RY", (q,), theta)

    def rz(self, q: int, theta: float) -> Circuit:
        return self._add("RZ", (q,), theta)

    def phase(self, q: int, phi: float) -> Circuit:
        return self._add("Phase", (q,), phi)

    def cphase(self, control: int, target: int, phi: float) -> Circuit:
        return self._add("CPhase", (control, target), phi)

    def cry(self, control: int, target: int, theta: float) -> Circuit:
        return self._add("CRY", (control, target), theta)

    def rxx(self, a: int, b: int, theta: float) -> Circuit:
        return self._add("RXX", (a, b), theta)

    def ryy(self, a: int, b: int, theta: float) -> Circuit:
        return self._add("RYY", (a, b), theta)

    def rzz(self, a: int, b: int, theta: float) -> Circuit:
        return self._add("RZZ", (a, b), theta)

    def dumps(self) -> str:
        """Text dump, one op per line: ``name q0,q1 [param]``."""
        lines = []
        for op in self._ops:
            line = f"{op.name} {','.join(map(str, op.qubits))}"
            if op.parameter is not None:
                line += f" {op.parameter:.17g}"
            lines.append(line + "\n")
        return "".join(lines)

    def __repr__(self) -> str:
        return f"Circuit(num_qubits={self.num_qubits}, ops={len(self._ops)})"


def _check_width(circuit: Circuit, backend) -> None:
    if backend.num_qubits != circuit.num_qubits:
        raise DimensionError(
            f"circuit has {circuit.num_qubits} qubits but the state has {backend.num_qubits}"
        )
    if circuit.noise_models:
        raise CapabilityError("noise models are not supported; execution is noiseless")


def execute(circuit: Circuit, state: DenseState) -> None:
    """Run ``circuit`` on a dense state in place, using the bitwise kernels."""
    _check_width(circuit, state)
    for op in circuit._ops:
        apply_gate(state, op.gate)


def toffoli_decomposition(c1: int, c2: int, target: int) -> list[Gate]:
    """Six-CNOT Clifford+T network equal to Toffoli(c1, c2, target)."""
    g = standard_gate
    return [
        g("H", (target,)),
        g("CNOT", (c2, target)),
        g("Tdg", (target,)),
        g("CNOT", (c1, target)),
        g("T", (target,)),
        g("CNOT", (c2, target)),
        g("Tdg", (target,)),
        g("CNOT", (c1, target)),
        g("T", (c2,)),
        g("T", (target,)),
        g("H", (target,)),
        g("CNOT", (c1, c2)),
        g("T", (c1,)),
        g("Tdg", (c2,)),
        g("CNOT", (c1, c2)),
    ]


def execute_on_backend(circuit: Circuit, backend: StateBackend) -> None:
    """Run ``circuit`` through the generic backend interface.

    One- and two-qubit ops go to the matching backend path. Three-qubit ops use
    the backend's full-matrix path; backends without one (MPS) get Toffoli as a
    two-qubit decomposition and raise :class:`CapabilityError` otherwise.
    """
    _check_width(circuit, backend)
    for op in circuit._ops:
        _dispatch(backend, op.gate)


def _dispatch(backend: StateBackend, gate: Gate) -> None:
    qs = gate.qubits
    if gate.arity == 1:
        backend.apply_single_qubit(qs[0], gate.matrix)
    elif gate.arity == 2:
        backend.apply_two_qubit(qs[0], qs[1], gate.matrix)
    elif isinstance(backend, DenseState):
        backend.apply_full_matrix(qs, gate.matrix)
    elif gate.name == "Toffoli":
        for sub in toffoli_decomposition(*qs):
            _dispatch(backend, sub)
    else:
        raise CapabilityError(f"{type(backend).__name__} cannot apply {gate.arity}-qubit gate {gate.name}")


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense ``2**n x 2**n`` unitary, built column by column. Testing aid for small n."""
    n = circuit.num_qubits
    if n > 12:
        raise SizeError("circuit_unitary is limited to 12 qubits")
    cols = []
    for k in range(1 << n):
        st = DenseState.basis_state(n, k)
        execute(circuit, st)
        cols.append(st.amplitudes)
    return np.stack(cols, axis=1)

