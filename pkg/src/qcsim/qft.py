"""Quantum Fourier transform: direct FFT on dense amplitudes and a gate circuit.

Both compute ``|x> -> N**-0.5 * sum_k exp(2 pi i x k / N) |k>`` in MSB-first
ordering. The gate circuit ends with the qubit-reversing SWAP layer, which is
exactly what makes it agree with the plain transform of the amplitude vector.
"""

from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit
from .dense import DenseState
from .errors import SizeError


def qft_dense_fft(state: DenseState) -> None:
    """QFT in place via an inverse FFT with ``1/sqrt(N)`` normalization. O(N log N)."""
    psi = state.amplitudes
    psi[:] = np.fft.ifft(psi, norm="ortho")


def inverse_qft_dense_fft(state: DenseState) -> None:
    psi = state.amplitudes
    psi[:] = np.fft.fft(psi, norm="ortho")


def qft_circuit(num_qubits: int) -> Circuit:
    """H / controlled-phase ladder followed by the reversing SWAPs.

    Gate count is ``n + n(n-1)/2 + n//2``.
    """
    if num_qubits < 1:
        raise SizeError(f"QFT needs at least one qubit, got {num_qubits}")
    c = Circuit(num_qubits)
    for i in range(num_qubits):
        c.h(i)
        for j in range(i + 1, num_qubits):
            c.cphase(i, j, math.pi / 2 ** (j - i))
    for i in range(num_qubits // 2):
        c.swap(i, num_qubits - 1 - i)
    return c


def inverse_qft_circuit(num_qubits: int) -> Circuit:
    """Reverse gate order of :func:`qft_circuit` with negated phases."""
    forward = qft_circuit(num_qubits)
    c = Circuit(num_qubits)
    for op in reversed(forward.operations):
        if op.name == "CPhase":
            c.cphase(op.qubits[0], op.qubits[1], -op.parameter)
        else:
            c.append(op.gate)
    return c
