"""Matrix-product-state backend.

Site ``i`` holds a tensor of shape ``(chi_left, 2, chi_right)`` with open
boundaries (``chi`` is 1 at both ends). Site 0 is qubit 0, the most significant
bit of the dense index, so :meth:`MpsState.to_dense` agrees with
:class:`~qcsim.dense.DenseState` ordering.

Two-site gates contract the pair into ``theta``, apply the 4x4 gate on the
physical legs, split with an SVD, drop singular values below the threshold,
cap the bond at ``max_bond_dim``, rescale the kept spectrum to unit weight and
absorb it into the left tensor. The state keeps a single orthogonality centre
that is walked to the left site of each two-site update with QR steps, which
makes the singular values true Schmidt coefficients and the renormalization
exact.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from .dense import DenseState
from .errors import BoundsError, CapabilityError, DimensionError, GateConstructionError, NumericalError, SizeError
from .gates import gate_matrix, is_unitary, validation_enabled

#: Width above which :meth:`MpsState.to_dense` refuses to contract.
DENSE_CONTRACTION_LIMIT = 20

_SWAP = gate_matrix("SWAP")


@dataclass(frozen=True)
class MpsConfig:
    """Truncation policy: keep singular values >= ``truncation_threshold``, at most ``max_bond_dim``."""

    max_bond_dim: int = 64
    truncation_threshold: float = 1e-8

    def __post_init__(self) -> None:
        if int(self.max_bond_dim) < 1:
            raise ValueError(f"max_bond_dim must be >= 1, got {self.max_bond_dim}")
        if not self.truncation_threshold >= 0:
            raise ValueError(f"truncation_threshold must be >= 0, got {self.truncation_threshold}")


@dataclass
class TruncationInfo:
    """Bookkeeping for the most recent two-site split."""

    site: int
    kept: int
    discarded_weight: float
    largest_discarded: float
    cap_limited: bool
    #: Full singular spectrum of the split, before truncation and renormalization.
    singular_values: NDArray[np.float64] | None = None


@dataclass
class MpsState:
    tensors: list[NDArray[np.complex128]]
    config: MpsConfig = field(default_factory=MpsConfig)
    cumulative_discarded_weight: float = 0.0
    center: int = 0
    peak_bond_dim: int = 1
    last_truncation: TruncationInfo | None = None
    #: Sum of Fubini-Study angles ``arcsin(sqrt(w))`` moved by each truncation.
    #: Bounds the distance to the untruncated state: ``1 - |<exact|mps>| <= 1 - cos(angle)``.
    truncation_angle: float = 0.0

    # -- construction -----------------------------------------------------

    @classmethod
    def product_state(cls, bits: Sequence[int], config: MpsConfig | None = None) -> MpsState:
        if len(bits) < 1:
            raise SizeError("MPS needs at least one site")
        tensors = []
        for b in bits:
            t = np.zeros((1, 2, 1), dtype=np.complex128)
            t[0, int(b), 0] = 1.0
            tensors.append(t)
        return cls(tensors, config or MpsConfig())

    @classmethod
    def zero_state(cls, num_qubits: int, config: MpsConfig | None = None) -> MpsState:
        """``|0...0>`` with every bond of dimension 1."""
        if num_qubits < 1:
            raise SizeError(f"MPS needs num_qubits >= 1, got {num_qubits}")
        return cls.product_state([0] * num_qubits, config)

    @classmethod
    def one_state(cls, num_qubits: int, config: MpsConfig | None = None) -> MpsState:
        """``|1...1>`` with every bond of dimension 1."""
        if num_qubits < 1:
            raise SizeError(f"MPS needs num_qubits >= 1, got {num_qubits}")
        return cls.product_state([1] * num_qubits, config)

    @classmethod
    def basis_state(cls, num_qubits: int, index: int, config: MpsConfig | None = None) -> MpsState:
        if not 0 <= index < (1 << num_qubits):
            raise BoundsError(f"basis index {index} outside [0, 2**{num_qubits})")
        bits = [(index >> (num_qubits - 1 - q)) & 1 for q in range(num_qubits)]
        return cls.product_state(bits, config)

    @classmethod
    def from_dense(cls, state: DenseState, config: MpsConfig | None = None) -> MpsState:
        """Left-to-right SVD sweep of a dense vector (truncated with ``config``)."""
        config = config or MpsConfig()
        n = state.num_qubits
        rest = state.amplitudes.reshape(1, -1)
        tensors = []
        discarded = angle = 0.0
        for site in range(n - 1):
            chi_l = rest.shape[0]
            u, s, vh = _svd(rest.reshape(chi_l * 2, -1), site)
            k, d, _, _ = _truncation_rank(s, config)
            discarded += d
            angle += _angle(d / float(np.sum(s**2)))
            tensors.append(u[:, :k].reshape(chi_l, 2, k))
            rest = s[:k, None] * vh[:k]
        tensors.append(rest.reshape(rest.shape[0], 2, 1))
        mps = cls(tensors, config, cumulative_discarded_weight=discarded, center=n - 1)
        mps.truncation_angle = angle
        mps.peak_bond_dim = mps.max_bond_dim()
        return mps

    def copy(self) -> MpsState:
        return MpsState(
            [t.copy() for t in self.tensors],
            self.config,
            self.cumulative_discarded_weight,
            self.center,
            self.peak_bond_dim,
            copy.copy(self.last_truncation),
            self.truncation_angle,
        )

    # -- queries ----------------------------------------------------------

    @property
    def num_qubits(self) -> int:
        return len(self.tensors)

    def bond_dims(self) -> list[int]:
        """``[chi_1, ..., chi_{n-1}]``, the internal bonds left to right."""
        return [t.shape[2] for t in self.tensors[:-1]]

    def max_bond_dim(self) -> int:
        return max(self.bond_dims(), default=1)

    def memory_estimate(self) -> int:
        """Bytes held by the site tensors (16 per complex double)."""
        return 16 * sum(t.size for t in self.tensors)

    def check_qubit(self, site: int) -> None:
        if not 0 <= site < self.num_qubits:
            raise BoundsError(f"site {site} outside chain of length {self.num_qubits}")

    def to_dense(self, max_qubits: int = DENSE_CONTRACTION_LIMIT) -> DenseState:
        """Contract the chain into ``2**n`` MSB-first amplitudes."""
        n = self.num_qubits
        if n > max_qubits:
            raise SizeError(f"refusing to contract {n} sites into a dense vector (limit {max_qubits})")
        psi = self.tensors[0].reshape(2, -1)
        for t in self.tensors[1:]:
            chi_l, _, chi_r = t.shape
            psi = (psi @ t.reshape(chi_l, 2 * chi_r)).reshape(-1, chi_r)
        return DenseState(psi.reshape(-1), n)

    def inner(self, other: MpsState) -> complex:
        """``<self|other>`` by transfer-matrix contraction, O(n chi^3)."""
        if self.num_qubits != other.num_qubits:
            raise DimensionError(f"inner product of {self.num_qubits}- and {other.num_qubits}-site MPS")
        return _overlap(self.tensors, other.tensors)

    def norm(self) -> float:
        return float(np.sqrt(abs(self.inner(self))))

    # -- gates ------------------------------------------------------------

    def apply_single_qubit(self, site: int, matrix) -> None:
        """``A^s <- sum_s' U[s, s'] A^s'``; bonds and canonical form are untouched."""
        self.check_qubit(site)
        m = _as_gate(matrix, 2)
        self.tensors[site] = np.einsum("st,atb->asb", m, self.tensors[site])

    def apply_two_qubit_adjacent(self, site: int, matrix) -> None:
        """Apply a 4x4 gate to sites ``(site, site + 1)``; ``site`` is the high bit."""
        if not 0 <= site < self.num_qubits - 1:
            raise BoundsError(f"adjacent pair ({site}, {site + 1}) outside chain of length {self.num_qubits}")
        self._apply_pair(site, _as_gate(matrix, 4))

    def apply_two_qubit(self, q_a: int, q_b: int, matrix) -> None:
        """Apply a 4x4 gate to any pair, routing through adjacent SWAPs if needed.

        The placement of every qubit is restored before returning.
        """
        self.check_qubit(q_a)
        self.check_qubit(q_b)
        if q_a == q_b:
            raise GateConstructionError("two-qubit gate on a single site")
        m = _as_gate(matrix, 4)
        if q_a > q_b:
            q_a, q_b = q_b, q_a
            m = _SWAP @ m @ _SWAP
        for s in range(q_a, q_b - 1):
            self._apply_pair(s, _SWAP)
        self._apply_pair(q_b - 1, m)
        for s in reversed(range(q_a, q_b - 1)):
            self._apply_pair(s, _SWAP)

    def apply_full_matrix(self, qubits, matrix) -> None:
        raise CapabilityError("the MPS backend only applies one- and two-qubit gates")

    # -- internals --------------------------------------------------------

    def move_center(self, target: int) -> None:
        """Shift the orthogonality centre to ``target`` with QR / LQ steps."""
        t = self.tensors
        while self.center < target:
            i = self.center
            chi_l, _, chi_r = t[i].shape
            q, r = np.linalg.qr(t[i].reshape(chi_l * 2, chi_r))
            t[i] = q.reshape(chi_l, 2, -1)
            t[i + 1] = np.tensordot(r, t[i + 1], axes=(1, 0))
            self.center += 1
        while self.center > target:
            i = self.center
            chi_l, _, chi_r = t[i].shape
            q, r = np.linalg.qr(t[i].reshape(chi_l, 2 * chi_r).T)
            t[i] = q.T.reshape(-1, 2, chi_r)
            t[i - 1] = np.tensordot(t[i - 1], r.T, axes=(2, 0))
            self.center -= 1

    def two_site_matrix(self, site: int, matrix) -> NDArray[np.complex128]:
        """``Theta'`` for a gate on ``(site, site + 1)``, reshaped to ``(2 chi_l, 2 chi_r)``.

        This is the matrix that gets decomposed by SVD; the state is not modified.
        """
        if not 0 <= site < self.num_qubits - 1:
            raise BoundsError(f"adjacent pair ({site}, {site + 1}) outside chain of length {self.num_qubits}")
        return self._theta(site, _as_gate(matrix, 4))

    def _theta(self, site: int, m: NDArray[np.complex128]) -> NDArray[np.complex128]:
        a, b = self.tensors[site], self.tensors[site + 1]
        theta = np.tensordot(a, b, axes=(2, 0))  # (chi_l, s1, s2, chi_r)
        theta = np.einsum("stuv,auvc->astc", m.reshape(2, 2, 2, 2), theta)
        return theta.reshape(a.shape[0] * 2, 2 * b.shape[2])

    def _apply_pair(self, site: int, m: NDArray[np.complex128]) -> None:
        self.move_center(site)
        chi_l, chi_r = self.tensors[site].shape[0], self.tensors[site + 1].shape[2]
        u, s, vh = _svd(self._theta(site, m), site)
        k, discarded, largest, capped = _truncation_rank(s, self.config)
        kept = s[:k] / np.linalg.norm(s[:k])
        self.tensors[site] = (u[:, :k] * kept).reshape(chi_l, 2, k)
        self.tensors[site + 1] = vh[:k].reshape(k, 2, chi_r)
        self.cumulative_discarded_weight += discarded
        self.truncation_angle += _angle(discarded / float(np.sum(s**2)))
        self.last_truncation = TruncationInfo(site, k, discarded, largest, capped, s.copy())
        if k > self.peak_bond_dim:
            self.peak_bond_dim = k

    def __repr__(self) -> str:
        return f"MpsState(num_qubits={self.num_qubits}, bond_dims={self.bond_dims()})"


def _as_gate(matrix, dim: int) -> NDArray[np.complex128]:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.shape != (dim, dim):
        raise DimensionError(f"expected a {dim}x{dim} matrix, got {m.shape}")
    if validation_enabled() and not is_unitary(m):
        raise GateConstructionError("matrix is not unitary")
    return m


def _svd(mat: NDArray[np.complex128], site: int):
    try:
        return np.linalg.svd(mat, full_matrices=False)
    except np.linalg.LinAlgError:
        pass
    try:
        return scipy.linalg.svd(mat, full_matrices=False, lapack_driver="gesvd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"SVD failed at site {site}: {exc}") from exc


def _truncation_rank(s: NDArray[np.float64], config: MpsConfig) -> tuple[int, float, float, bool]:
    """Number of singular values to keep, plus discarded weight diagnostics.

    ``s`` is sorted descending. At least one value always survives.
    """
    if not np.all(np.isfinite(s)):
        raise NumericalError("non-finite singular values")
    above = int(np.count_nonzero(s >= config.truncation_threshold))
    k = max(1, min(above, config.max_bond_dim))
    tail = s[k:]
    discarded = float(np.sum(tail**2))
    largest = float(tail[0]) if tail.size else 0.0
    return k, discarded, largest, above > config.max_bond_dim


def _angle(weight: float) -> float:
    return math.asin(math.sqrt(min(1.0, max(0.0, weight))))


def _overlap(bra: Sequence[NDArray], ket: Sequence[NDArray]) -> complex:
    env = np.ones((1, 1), dtype=np.complex128)
    for a, b in zip(bra, ket):
        tmp = np.tensordot(env, b, axes=(1, 0))  # (bra_l, s, ket_r)
        env = np.tensordot(a.conj(), tmp, axes=([0, 1], [0, 1]))
    return complex(env[0, 0])


def zero_state(num_qubits: int, config: MpsConfig | None = None) -> MpsState:
    return MpsState.zero_state(num_qubits, config)


def one_state(num_qubits: int, config: MpsConfig | None = None) -> MpsState:
    return MpsState.one_state(num_qubits, config)


def to_dense(state: MpsState) -> DenseState:
    return state.to_dense()


def inner_product(a: MpsState, b: MpsState) -> complex:
    return a.inner(b)
