"""Gate descriptors and dense-state gate kernels.

Controlled gates (CNOT, CZ, controlled-phase, Toffoli) never build a matrix on
the dense path. They select the affected basis indices with bit masks and
either swap amplitude pairs or multiply by a phase. Everything else goes
through the generic 1-, 2- or k-qubit matrix kernels, which touch each
amplitude a constant number of times.

Multi-qubit matrices use the order of ``qubits``: the first listed qubit is the
most significant bit of the matrix row/column index.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from numpy.typing import NDArray

from .dense import DenseState
from .errors import BoundsError, DimensionError, GateConstructionError

_SQ2 = 1.0 / math.sqrt(2.0)

_I2 = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

PAULI = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}

_FIXED: dict[str, NDArray[np.complex128]] = {
    "I": _I2,
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=np.complex128),
    "X": _X,
    "Y": _Y,
    "Z": _Z,
    "S": np.diag([1, 1j]).astype(np.complex128),
    "Sdg": np.diag([1, -1j]).astype(np.complex128),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]).astype(np.complex128),
    "Tdg": np.diag([1, np.exp(-1j * math.pi / 4)]).astype(np.complex128),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(np.complex128),
    "SWAP": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
    ),
    "Toffoli": np.eye(8, dtype=np.complex128)[[0, 1, 2, 3, 4, 5, 7, 6]],
}


def _rot(pauli: NDArray[np.complex128], theta: float) -> NDArray[np.complex128]:
    # exp(-i theta P / 2) for any P with P^2 = I
    eye = np.eye(pauli.shape[0], dtype=np.complex128)
    return math.cos(theta / 2) * eye - 1j * math.sin(theta / 2) * pauli


def _cry(theta: float) -> NDArray[np.complex128]:
    m = np.eye(4, dtype=np.complex128)
    m[2:, 2:] = _rot(_Y, theta)
    return m


_PARAMETRIC = {
    "RX": lambda t: _rot(_X, t),
    "RY": lambda t: _rot(_Y, t),
    "RZ": lambda t: _rot(_Z, t),
    "Phase": lambda t: np.diag([1, np.exp(1j * t)]).astype(np.complex128),
    "CPhase": lambda t: np.diag([1, 1, 1, np.exp(1j * t)]).astype(np.complex128),
    "CRY": _cry,
    "RXX": lambda t: _rot(np.kron(_X, _X), t),
    "RYY": lambda t: _rot(np.kron(_Y, _Y), t),
    "RZZ": lambda t: _rot(np.kron(_Z, _Z), t),
}

for _m in _FIXED.values():
    _m.setflags(write=False)

FIXED_KINDS = frozenset(_FIXED)
PARAMETRIC_KINDS = frozenset(_PARAMETRIC)

_VALIDATE = True


def validation_enabled() -> bool:
    return _VALIDATE


@contextlib.contextmanager
def validation(enabled: bool) -> Iterator[None]:
    """Temporarily switch the unitarity check on user-supplied matrices.

    Benchmarks run with ``validation(False)``.
    """
    global _VALIDATE
    previous = _VALIDATE
    _VALIDATE = enabled
    try:
        yield
    finally:
        _VALIDATE = previous


def is_unitary(matrix: NDArray[np.complex128], atol: float = 1e-10) -> bool:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=atol))


def gate_matrix(kind: str, parameter: float | None = None) -> NDArray[np.complex128]:
    """Matrix of a standard gate. ``parameter`` is required iff ``kind`` is parametric."""
    if kind in _FIXED:
        if parameter is not None:
            raise GateConstructionError(f"{kind} takes no parameter")
        return _FIXED[kind]
    if kind in _PARAMETRIC:
        if parameter is None:
            raise GateConstructionError(f"{kind} requires a rotation angle")
        theta = float(parameter)
        if not math.isfinite(theta):
            raise GateConstructionError(f"{kind} angle must be finite, got {parameter!r}")
        m = _PARAMETRIC[kind](theta)
        m.setflags(write=False)
        return m
    raise GateConstructionError(f"unknown gate kind {kind!r}")


@dataclass(frozen=True, eq=False)
class Gate:
    """Immutable gate descriptor: a unitary bound to an ordered list of qubits."""

    name: str
    qubits: tuple[int, ...]
    matrix: NDArray[np.complex128]
    parameter: float | None = None

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        k = len(self.qubits)
        if m.shape != (1 << k, 1 << k):
            raise GateConstructionError(
                f"{self.name}: {k} qubits need a {1 << k}x{1 << k} matrix, got {m.shape}"
            )
        if len(set(self.qubits)) != k:
            raise GateConstructionError(f"{self.name}: repeated qubit in {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise GateConstructionError(f"{self.name}: negative qubit index in {self.qubits}")
        if _VALIDATE and not is_unitary(m):
            raise GateConstructionError(f"{self.name}: matrix is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def __repr__(self) -> str:
        p = "" if self.parameter is None else f", {self.parameter!r}"
        return f"Gate({self.name}, {list(self.qubits)}{p})"


_ARITY = {
    **{k: 1 for k in ("I", "H", "X", "Y", "Z", "S", "Sdg", "T", "Tdg", "RX", "RY", "RZ", "Phase")},
    **{k: 2 for k in ("CNOT", "CZ", "SWAP", "CPhase", "CRY", "RXX", "RYY", "RZZ")},
    "Toffoli": 3,
}


def standard_gate(kind: str, qubits: Sequence[int], parameter: float | None = None) -> Gate:
    """Build a named standard gate on ``qubits``.

    Raises:
        GateConstructionError: unknown kind, wrong qubit count, a parameter
            passed to a fixed gate, or a missing parameter on a rotation.
    """
    matrix = gate_matrix(kind, parameter)
    qubits = tuple(qubits)
    if len(qubits) != _ARITY[kind]:
        raise GateConstructionError(f"{kind} acts on {_ARITY[kind]} qubit(s), got {len(qubits)}")
    if len(set(qubits)) != len(qubits) or any(q < 0 for q in qubits):
        raise GateConstructionError(f"{kind}: qubits must be distinct and nonnegative, got {qubits}")
    # standard matrices are unitary by construction; skip the O(d^3) check
    gate = object.__new__(Gate)
    object.__setattr__(gate, "name", kind)
    object.__setattr__(gate, "qubits", tuple(int(q) for q in qubits))
    object.__setattr__(gate, "matrix", matrix)
    object.__setattr__(gate, "parameter", None if parameter is None else float(parameter))
    return gate


# ---------------------------------------------------------------------------
# dense kernels


def _bit(state: DenseState, qubit: int) -> int:
    state.check_qubit(qubit)
    return state.num_qubits - 1 - qubit


def _indices_uncached(n: int, ones: tuple[int, ...], zeros: tuple[int, ...]) -> NDArray[np.int64]:
    # All basis indices whose bit positions in ``ones`` are 1 and in ``zeros`` are 0,
    # generated by inserting the fixed bits into a counter over the free bits.
    fixed = sorted(ones + zeros)
    k = np.arange(1 << (n - len(fixed)), dtype=np.int64)
    for pos in fixed:
        low = k & ((1 << pos) - 1)
        k = ((k >> pos) << (pos + 1)) | low
    mask = 0
    for pos in ones:
        mask |= 1 << pos
    return k | mask


_indices_cached = lru_cache(maxsize=256)(_indices_uncached)


def _indices(n: int, ones: tuple[int, ...], zeros: tuple[int, ...] = ()) -> NDArray[np.int64]:
    if n <= 20:
        return _indices_cached(n, ones, zeros)
    return _indices_uncached(n, ones, zeros)


def apply_cnot(state: DenseState, control: int, target: int) -> None:
    """Flip ``target`` wherever ``control`` is set, by swapping amplitude pairs."""
    c_bit, t_bit = _bit(state, control), _bit(state, target)
    if control == target:
        raise GateConstructionError("CNOT control and target coincide")
    psi = state.amplitudes
    i = _indices(state.num_qubits, (c_bit,), (t_bit,))
    j = i ^ (1 << t_bit)
    tmp = psi[i]
    psi[i] = psi[j]
    psi[j] = tmp


def apply_toffoli(state: DenseState, c1: int, c2: int, target: int) -> None:
    """Flip ``target`` wherever both controls are set."""
    if len({c1, c2, target}) != 3:
        raise GateConstructionError(f"Toffoli qubits must be distinct, got {(c1, c2, target)}")
    b1, b2, t_bit = _bit(state, c1), _bit(state, c2), _bit(state, target)
    psi = state.amplitudes
    i = _indices(state.num_qubits, tuple(sorted((b1, b2))), (t_bit,))
    j = i ^ (1 << t_bit)
    tmp = psi[i]
    psi[i] = psi[j]
    psi[j] = tmp


def apply_cphase(state: DenseState, q_a: int, q_b: int, phi: float) -> None:
    """Multiply amplitudes with both bits set by ``exp(i phi)``. Symmetric in its qubits."""
    if q_a == q_b:
        raise GateConstructionError("controlled-phase qubits coincide")
    ba, bb = _bit(state, q_a), _bit(state, q_b)
    i = _indices(state.num_qubits, tuple(sorted((ba, bb))))
    state.amplitudes[i] *= np.exp(1j * phi)


def apply_cz(state: DenseState, q_a: int, q_b: int) -> None:
    if q_a == q_b:
        raise GateConstructionError("CZ qubits coincide")
    ba, bb = _bit(state, q_a), _bit(state, q_b)
    i = _indices(state.num_qubits, tuple(sorted((ba, bb))))
    state.amplitudes[i] *= -1.0


def _check_matrix(matrix, dim: int) -> NDArray[np.complex128]:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.shape != (dim, dim):
        raise DimensionError(f"expected a {dim}x{dim} matrix, got {m.shape}")
    if _VALIDATE and not is_unitary(m):
        raise GateConstructionError("matrix is not unitary")
    return m


def apply_single_qubit(state: DenseState, qubit: int, matrix) -> None:
    """Apply a 2x2 matrix to every amplitude pair ``(i, i ^ mask)``."""
    _single(state, qubit, _check_matrix(matrix, 2))


def _single(state: DenseState, qubit: int, m: NDArray[np.complex128]) -> None:
    state.check_qubit(qubit)
    n = state.num_qubits
    v = state.amplitudes.reshape(1 << qubit, 2, 1 << (n - 1 - qubit))
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    v[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1


def _slot(n: int, axes: Sequence[int], values: Sequence[int]) -> tuple:
    idx: list = [slice(None)] * n
    for ax, val in zip(axes, values):
        idx[ax] = val
    return tuple(idx)


def apply_two_qubit(state: DenseState, q_a: int, q_b: int, matrix) -> None:
    """Apply a 4x4 matrix to amplitude quadruples; ``q_a`` is the high bit."""
    _two(state, q_a, q_b, _check_matrix(matrix, 4))


def _two(state: DenseState, q_a: int, q_b: int, m: NDArray[np.complex128]) -> None:
    state.check_qubit(q_a)
    state.check_qubit(q_b)
    if q_a == q_b:
        raise GateConstructionError("two-qubit gate on a single qubit")
    n = state.num_qubits
    t = state.amplitudes.reshape((2,) * n)
    keys = [(0, 0), (0, 1), (1, 0), (1, 1)]
    old = np.stack([t[_slot(n, (q_a, q_b), k)] for k in keys])
    new = np.tensordot(m, old, axes=1)
    for k, row in zip(keys, new):
        t[_slot(n, (q_a, q_b), k)] = row


def apply_matrix(state: DenseState, qubits: Sequence[int], matrix) -> None:
    """Generic k-qubit matrix application (``qubits[0]`` is the high bit)."""
    qubits = list(qubits)
    k = len(qubits)
    m = _check_matrix(matrix, 1 << k)
    for q in qubits:
        state.check_qubit(q)
    if len(set(qubits)) != k:
        raise GateConstructionError(f"repeated qubit in {qubits}")
    n = state.num_qubits
    t = np.moveaxis(state.amplitudes.reshape((2,) * n), qubits, range(k))
    shape = t.shape
    out = (m @ t.reshape(1 << k, -1)).reshape(shape)
    state.amplitudes[:] = np.moveaxis(out, range(k), qubits).reshape(-1)


def apply_gate(state: DenseState, gate: Gate) -> None:
    """Apply ``gate`` using the bitwise kernel for its family when one exists."""
    for q in gate.qubits:
        if q >= state.num_qubits:
            raise BoundsError(f"{gate.name} touches qubit {q} of a {state.num_qubits}-qubit state")
    name, qs = gate.name, gate.qubits
    if name == "CNOT":
        apply_cnot(state, *qs)
    elif name == "Toffoli":
        apply_toffoli(state, *qs)
    elif name == "CPhase":
        apply_cphase(state, qs[0], qs[1], gate.parameter)
    elif name == "CZ":
        apply_cz(state, *qs)
    elif name == "I":
        pass
    elif gate.arity == 1:
        _single(state, qs[0], gate.matrix)
    elif gate.arity == 2:
        _two(state, qs[0], qs[1], gate.matrix)
    else:
        apply_matrix(state, qs, gate.matrix)
