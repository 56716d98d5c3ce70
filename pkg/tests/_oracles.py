"""Independent reference implementations used as test oracles.

Nothing here calls into the kernels under test: operators are assembled
entry by entry from their definition, Pauli sums from Kronecker products.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from qcsim.circuit import Circuit

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def bits_of(index: int, n: int) -> list[int]:
    """MSB-first: qubit 0 is the most significant bit."""
    return [(index >> (n - 1 - q)) & 1 for q in range(n)]


def embed(n: int, qubits, m: np.ndarray) -> np.ndarray:
    """Full ``2**n`` operator for ``m`` acting on ``qubits`` (first listed = high bit of ``m``)."""
    k = len(qubits)
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        cb = bits_of(col, n)
        sub_in = int("".join(str(cb[q]) for q in qubits), 2)
        for sub_out in range(1 << k):
            amp = m[sub_out, sub_in]
            if amp == 0:
                continue
            rb = list(cb)
            for j, q in enumerate(qubits):
                rb[q] = (sub_out >> (k - 1 - j)) & 1
            row = int("".join(map(str, rb)), 2)
            out[row, col] += amp
    return out


def rot(pauli: np.ndarray, theta: float) -> np.ndarray:
    return np.cos(theta / 2) * np.eye(len(pauli)) - 1j * np.sin(theta / 2) * pauli


def controlled(u: np.ndarray) -> np.ndarray:
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = u
    return out


def pauli_matrix(word: str) -> np.ndarray:
    return reduce(np.kron, [PAULI[p] for p in word])


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def dft_matrix(n: int) -> np.ndarray:
    """``F[k, x] = exp(2 pi i x k / N) / sqrt(N)``."""
    dim = 1 << n
    k = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(k, k) / dim) / np.sqrt(dim)


ONE_QUBIT = ("h", "x", "y", "z", "s", "t", "rx", "ry", "rz", "phase")
TWO_QUBIT = ("cnot", "cz", "swap", "cphase", "cry", "rxx", "ryy", "rzz")
PARAMETRIC = {"rx", "ry", "rz", "phase", "cphase", "cry", "rxx", "ryy", "rzz"}


def random_circuit(n: int, depth: int, rng: np.random.Generator, toffoli: bool = True) -> Circuit:
    """Random circuit over the builder gate set."""
    c = Circuit(n)
    kinds = list(ONE_QUBIT)
    if n >= 2:
        kinds += TWO_QUBIT
    if n >= 3 and toffoli:
        kinds.append("toffoli")
    for _ in range(depth):
        kind = kinds[rng.integers(len(kinds))]
        arity = 1 if kind in ONE_QUBIT else (3 if kind == "toffoli" else 2)
        qs = [int(q) for q in rng.choice(n, size=arity, replace=False)]
        args = qs + ([float(rng.uniform(-np.pi, np.pi))] if kind in PARAMETRIC else [])
        getattr(c, kind)(*args)
    return c
