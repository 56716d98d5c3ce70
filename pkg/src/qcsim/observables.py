"""Pauli strings, weighted Pauli sums, and their expectation values."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache, reduce
from importlib import resources
from typing import Iterable

import numpy as np
from numpy.typing import NDArray

from .dense import DenseState
from .errors import DimensionError, HamiltonianParseError, NumericalError
from .gates import PAULI
from .mps import MpsState, _overlap

_LETTERS = frozenset("IXYZ")

#: Imaginary residue above which an expectation value is treated as corrupt.
IMAG_TOL = 1e-10


@lru_cache(maxsize=256)
def _dense_action(ops: str) -> tuple[NDArray[np.int64] | None, NDArray[np.float64], complex]:
    # P = i^{#Y} X^{flip} Z^{zmask}; returns (index permutation, sign vector, global factor)
    n = len(ops)
    flip = zmask = 0
    n_y = 0
    for q, p in enumerate(ops):
        bit = 1 << (n - 1 - q)
        if p in "XY":
            flip |= bit
        if p in "ZY":
            zmask |= bit
        n_y += p == "Y"
    idx = np.arange(1 << n, dtype=np.int64)
    parity = np.zeros(1 << n, dtype=np.int64)
    m = idx & zmask
    while np.any(m):
        parity ^= m & 1
        m >>= 1
    sign = 1.0 - 2.0 * parity
    return (idx ^ flip if flip else None), sign, 1j**n_y


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis; character ``q`` acts on qubit ``q``."""

    ops: str

    def __post_init__(self) -> None:
        ops = self.ops.upper()
        if not ops or not set(ops) <= _LETTERS:
            raise ValueError(f"Pauli word must be a nonempty string over IXYZ, got {self.ops!r}")
        object.__setattr__(self, "ops", ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __str__(self) -> str:
        return self.ops

    @property
    def is_identity(self) -> bool:
        return set(self.ops) == {"I"}

    def apply_dense(self, state: DenseState) -> DenseState:
        """Return ``P|psi>`` as a new state."""
        if state.num_qubits != len(self.ops):
            raise DimensionError(f"{len(self.ops)}-qubit Pauli on a {state.num_qubits}-qubit state")
        perm, sign, factor = _dense_action(self.ops)
        out = sign * state.amplitudes
        if perm is not None:
            out = out[perm]
        if factor != 1:
            out *= factor
        return DenseState(out, state.num_qubits)

    def apply_mps(self, state: MpsState) -> list[NDArray[np.complex128]]:
        """Site tensors of ``P|psi>``; untouched sites are shared, not copied."""
        if state.num_qubits != len(self.ops):
            raise DimensionError(f"{len(self.ops)}-qubit Pauli on a {state.num_qubits}-site MPS")
        return [
            t if p == "I" else np.einsum("st,atb->asb", PAULI[p], t)
            for p, t in zip(self.ops, state.tensors)
        ]

    def expectation(self, state: DenseState | MpsState) -> complex:
        """``<psi|P|psi>`` (complex; the imaginary part should vanish)."""
        if isinstance(state, MpsState):
            return _overlap(state.tensors, self.apply_mps(state))
        return state.inner(self.apply_dense(state))

    def to_matrix(self) -> NDArray[np.complex128]:
        return reduce(np.kron, [PAULI[p] for p in self.ops])


class PauliObservable:
    """``H = sum_i c_i P_i`` with real coefficients and equal-length Pauli strings."""

    def __init__(
        self,
        terms: Iterable[tuple[float, PauliString | str]],
        num_qubits: int | None = None,
    ) -> None:
        parsed = []
        for coeff, word in terms:
            c = float(coeff)
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient {coeff!r}")
            parsed.append((c, word if isinstance(word, PauliString) else PauliString(word)))
        widths = {len(p) for _, p in parsed}
        if num_qubits is not None:
            widths.add(num_qubits)
        if len(widths) > 1:
            raise DimensionError(f"Pauli strings of mixed widths {sorted(widths)}")
        if not widths:
            raise DimensionError("an empty observable needs an explicit num_qubits")
        self.terms: tuple[tuple[float, PauliString], ...] = tuple(parsed)
        self.num_qubits = widths.pop()

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __repr__(self) -> str:
        return f"PauliObservable({len(self.terms)} terms, num_qubits={self.num_qubits})"

    def expectation(self, state: DenseState | MpsState) -> float:
        return expectation(self, state)

    def to_matrix(self) -> NDArray[np.complex128]:
        dim = 1 << self.num_qubits
        out = np.zeros((dim, dim), dtype=np.complex128)
        for c, p in self.terms:
            out += c * p.to_matrix()
        return out

    def ground_energy(self) -> float:
        """Smallest eigenvalue by dense diagonalization (small widths only)."""
        return float(np.linalg.eigvalsh(self.to_matrix())[0])

    def dumps(self) -> str:
        return "".join(f"{c:.17g} {p}\n" for c, p in self.terms)

    @classmethod
    def parse(cls, text: str, num_qubits: int | None = None) -> PauliObservable:
        """Parse ``coefficient pauli_word`` lines; ``#`` starts a comment."""
        terms = []
        width = num_qubits
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 2:
                raise HamiltonianParseError(f"expected 'coefficient word', got {raw.strip()!r}", lineno)
            try:
                coeff = float(fields[0])
            except ValueError:
                raise HamiltonianParseError(f"bad coefficient {fields[0]!r}", lineno) from None
            if not np.isfinite(coeff):
                raise HamiltonianParseError(f"non-finite coefficient {fields[0]!r}", lineno)
            word = fields[1].upper()
            if not set(word) <= _LETTERS:
                raise HamiltonianParseError(f"bad Pauli word {fields[1]!r}", lineno)
            if width is None:
                width = len(word)
            elif len(word) != width:
                raise HamiltonianParseError(f"word {word!r} has length {len(word)}, expected {width}", lineno)
            terms.append((coeff, PauliString(word)))
        if width is None:
            raise HamiltonianParseError("no terms found and no width given")
        return cls(terms, width)

    @classmethod
    def load(cls, path: str | os.PathLike) -> PauliObservable:
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())


H2_DATA_FILE = "h2_sto3g_0.735.txt"
#: Exact ground energy of the bundled operator (Hartree).
H2_EXACT_ENERGY = -1.1373060357534
#: Published "E_FCI" figure for this molecule. It does not match the bundled
#: operator (or literature STO-3G values) and is kept as metadata only.
H2_PUBLISHED_FCI = -1.7929182423


def h2_hamiltonian() -> PauliObservable:
    """Four-qubit Jordan-Wigner H2 Hamiltonian (STO-3G, 0.735 Angstrom) shipped with the package."""
    text = resources.files("qcsim").joinpath("data").joinpath(H2_DATA_FILE).read_text(encoding="utf-8")
    return PauliObservable.parse(text)


def expectation(observable: PauliObservable, state: DenseState | MpsState) -> float:
    """``sum_i c_i Re<psi|P_i|psi>``.

    Raises:
        DimensionError: width mismatch.
        NumericalError: an imaginary residue above ``IMAG_TOL`` or a non-finite value.
    """
    if observable.num_qubits != state.num_qubits:
        raise DimensionError(
            f"{observable.num_qubits}-qubit observable on a {state.num_qubits}-qubit state"
        )
    total = 0.0
    for c, p in observable.terms:
        val = p.expectation(state)
        if abs(val.imag) > IMAG_TOL:
            raise NumericalError(f"<{p}> has imaginary part {val.imag:.3e}")
        total += c * val.real
    if not np.isfinite(total):
        raise NumericalError("non-finite expectation value")
    return total


def single_term(word: str, coefficient: float = 1.0) -> PauliObservable:
    return PauliObservable([(coefficient, word)])


def z_on(qubit: int, num_qubits: int) -> PauliObservable:
    """``Z`` on one qubit of a ``num_qubits`` register."""
    ops = ["I"] * num_qubits
    ops[qubit] = "Z"
    return single_term("".join(ops))

