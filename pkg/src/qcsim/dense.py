"""Dense state-vector representation.

Amplitudes are stored MSB-first: qubit ``q`` of an ``n``-qubit register lives at
bit position ``n - 1 - q`` of the basis index, so ``|q0 q1 ... q_{n-1}>`` reads
left to right as a binary number. Every other module uses this convention.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from .errors import BoundsError, DimensionError, SizeError

#: Default upper bound on the dense register width (2**26 amplitudes, 1 GiB).
MAX_QUBITS = 26


def _check_width(num_qubits: int, max_qubits: int | None) -> None:
    cap = MAX_QUBITS if max_qubits is None else max_qubits
    if not 1 <= num_qubits <= cap:
        raise SizeError(f"dense state needs 1 <= num_qubits <= {cap}, got {num_qubits}")


class DenseState:
    """Full ``2**n`` amplitude vector of an ``n``-qubit pure state.

    The amplitude buffer is allocated once; gate kernels mutate it in place.
    """

    __slots__ = ("amplitudes", "num_qubits")

    def __init__(self, amplitudes: NDArray[np.complex128], num_qubits: int) -> None:
        amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)
        if amplitudes.ndim != 1 or amplitudes.shape[0] != 1 << num_qubits:
            raise DimensionError(
                f"expected {1 << num_qubits} amplitudes for {num_qubits} qubits, got shape {amplitudes.shape}"
            )
        self.amplitudes = amplitudes
        self.num_qubits = num_qubits

    @classmethod
    def zero_state(cls, num_qubits: int, *, max_qubits: int | None = None) -> DenseState:
        """Return ``|0...0>``."""
        _check_width(num_qubits, max_qubits)
        amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps, num_qubits)

    @classmethod
    def basis_state(cls, num_qubits: int, index: int, *, max_qubits: int | None = None) -> DenseState:
        """Return the computational basis state whose MSB-first label is ``index``.

        ``basis_state(3, 6)`` is ``|110>``.
        """
        _check_width(num_qubits, max_qubits)
        dim = 1 << num_qubits
        if not 0 <= index < dim:
            raise BoundsError(f"basis index {index} outside [0, {dim})")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, num_qubits)

    @classmethod
    def from_amplitudes(cls, amplitudes, *, normalize: bool = False) -> DenseState:
        amps = np.array(amplitudes, dtype=np.complex128).ravel()
        dim = amps.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise DimensionError(f"amplitude count {dim} is not a power of two >= 2")
        if normalize:
            amps /= np.linalg.norm(amps)
        return cls(amps, dim.bit_length() - 1)

    @classmethod
    def random(cls, num_qubits: int, rng: np.random.Generator | None = None) -> DenseState:
        """Haar-ish random state (normalized complex Gaussian vector)."""
        rng = np.random.default_rng() if rng is None else rng
        _check_width(num_qubits, None)
        dim = 1 << num_qubits
        amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        return cls(amps / np.linalg.norm(amps), num_qubits)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def copy(self) -> DenseState:
        return DenseState(self.amplitudes.copy(), self.num_qubits)

    def inner(self, other: DenseState) -> complex:
        """``<self|other>``."""
        if self.num_qubits != other.num_qubits:
            raise DimensionError(f"inner product of {self.num_qubits}- and {other.num_qubits}-qubit states")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def probabilities(self) -> NDArray[np.float64]:
        return self.amplitudes.real**2 + self.amplitudes.imag**2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def memory_estimate(self) -> int:
        """Bytes held by the amplitude buffer (16 per complex double)."""
        return 16 * self.dim

    def check_qubit(self, qubit: int) -> None:
        if not 0 <= qubit < self.num_qubits:
            raise BoundsError(f"qubit {qubit} outside register of width {self.num_qubits}")

    def dumps(self) -> str:
        """Debug dump: ``index<TAB>re<TAB>im`` per line, 17 significant digits."""
        return "".join(
            f"{i}\t{a.real:.17g}\t{a.imag:.17g}\n" for i, a in enumerate(self.amplitudes)
        )

    # Backend protocol shared with MpsState; kernels live in qcsim.gates.
    def apply_single_qubit(self, qubit: int, matrix) -> None:
        from .gates import apply_single_qubit

        apply_single_qubit(self, qubit, matrix)

    def apply_two_qubit(self, q_a: int, q_b: int, matrix) -> None:
        from .gates import apply_two_qubit

        apply_two_qubit(self, q_a, q_b, matrix)

    def apply_full_matrix(self, qubits, matrix) -> None:
        from .gates import apply_matrix

        apply_matrix(self, qubits, matrix)

    def __repr__(self) -> str:
        return f"DenseState(num_qubits={self.num_qubits})"


def zero_state(num_qubits: int) -> DenseState:
    return DenseState.zero_state(num_qubits)


def basis_state(num_qubits: int, index: int) -> DenseState:
    return DenseState.basis_state(num_qubits, index)


def inner_product(a: DenseState, b: DenseState) -> complex:
    """``sum_i conj(a_i) * b_i``."""
    return a.inner(b)


def probabilities(state: DenseState) -> NDArray[np.float64]:
    return state.probabilities()
