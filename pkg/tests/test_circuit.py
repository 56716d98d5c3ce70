from __future__ import annotations

import math

import numpy as np
import pytest

from _oracles import embed, random_circuit, random_state
from qcsim.circuit import Circuit, circuit_unitary, execute, execute_on_backend, toffoli_decomposition
from qcsim.dense import DenseState, basis_state, zero_state
from qcsim.errors import CapabilityError, DimensionError, GateConstructionError, SizeError
from qcsim.gates import Gate, gate_matrix
from qcsim.mps import MpsConfig, MpsState
from qcsim.qft import qft_circuit


def test_builder_appends_in_order():
    c = Circuit(2).rx(0, 0.5).cnot(0, 1)
    assert len(c) == 2
    assert [op.name for op in c] == ["RX", "CNOT"]
    assert c.operations[0].parameter == 0.5
    assert c.operations[1].qubits == (0, 1)


def test_builder_rejects_bad_qubits():
    with pytest.raises(GateConstructionError):
        Circuit(2).cnot(0, 0)
    with pytest.raises(GateConstructionError):
        Circuit(2).h(2)
    with pytest.raises(GateConstructionError):
        Circuit(3).toffoli(0, 1, 1)
    with pytest.raises(SizeError):
        Circuit(0)


def test_rotation_without_angle_cannot_be_built():
    with pytest.raises(TypeError):
        Circuit(1).rx(0)  # type: ignore[call-arg]


def test_operations_view_is_immutable():
    c = Circuit(1).h(0)
    ops = c.operations
    assert isinstance(ops, tuple)
    c.x(0)
    assert len(ops) == 1 and len(c) == 2


def test_dump_format():
    c = Circuit(3).h(0).cphase(0, 2, math.pi / 4)
    assert c.dumps() == f"H 0\nCPhase 0,2 {math.pi / 4:.17g}\n"


def test_extend_copies_operations():
    a = Circuit(2).h(0)
    b = Circuit(2).cnot(0, 1).extend(a)
    assert [op.name for op in b] == ["CNOT", "H"]


def test_empty_circuit_leaves_state_unchanged(rng):
    psi = random_state(3, rng)
    s = DenseState(psi.copy(), 3)
    execute(Circuit(3), s)
    np.testing.assert_array_equal(s.amplitudes, psi)


def test_bell_preparation():
    s = zero_state(2)
    execute(Circuit(2).h(0).cnot(0, 1), s)
    np.testing.assert_allclose(s.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("theta", [(0.0, 0.0, 0.0), (0.3, -1.2, 2.5), (math.pi, math.pi / 2, 1e-9), (50.0, -7.0, 3.0)])
def test_interleaved_circuit_runs_for_any_angles(theta):
    c = Circuit(2).rx(0, theta[0]).cnot(0, 1).ry(1, theta[1]).cry(0, 1, theta[2])
    s = zero_state(2)
    execute(c, s)
    assert abs(s.norm() - 1) < 1e-12


def test_width_mismatch():
    with pytest.raises(DimensionError):
        execute(Circuit(2).h(0), zero_state(3))
    with pytest.raises(DimensionError):
        execute_on_backend(Circuit(2).h(0), MpsState.zero_state(3))


def test_noise_models_are_refused():
    c = Circuit(1, noise_models=["depolarizing"]).h(0)
    with pytest.raises(CapabilityError):
        execute(c, zero_state(1))


def test_order_preservation(rng):
    for _ in range(20):
        a = random_circuit(3, 1, rng)
        b = random_circuit(3, 1, rng)
        psi = random_state(3, rng)
        seq = DenseState(psi.copy(), 3)
        execute(a, seq)
        execute(b, seq)
        both = DenseState(psi.copy(), 3)
        execute(Circuit(3).extend(a).extend(b), both)
        np.testing.assert_allclose(both.amplitudes, seq.amplitudes, atol=1e-12)


def test_circuit_unitary_matches_embedded_gates():
    c = Circuit(3).h(1).cnot(1, 2).rz(0, 0.3)
    expected = embed(3, [0], gate_matrix("RZ", 0.3)) @ embed(3, [1, 2], gate_matrix("CNOT")) @ embed(3, [1], gate_matrix("H"))
    np.testing.assert_allclose(circuit_unitary(c), expected, atol=1e-12)


@pytest.mark.parametrize("qubits", [(0, 1, 2), (2, 0, 1), (1, 2, 0), (0, 3, 1)])
def test_toffoli_decomposition_is_exact(qubits):
    n = 4
    c = Circuit(n)
    for g in toffoli_decomposition(*qubits):
        c.append(g)
    np.testing.assert_allclose(circuit_unitary(c), embed(n, list(qubits), gate_matrix("Toffoli")), atol=1e-12)
    assert sum(g.name == "CNOT" for g in toffoli_decomposition(*qubits)) == 6


def test_dense_and_mps_agree_on_random_circuits(rng):
    for _ in range(40):
        n = int(rng.integers(2, 11))
        c = random_circuit(n, int(rng.integers(1, 31)), rng)
        dense = zero_state(n)
        execute(c, dense)
        mps = MpsState.zero_state(n, MpsConfig(64, 1e-12))
        execute_on_backend(c, mps)
        np.testing.assert_allclose(mps.to_dense().amplitudes, dense.amplitudes, atol=1e-8)


def test_generic_dispatch_on_dense_matches_kernels(rng):
    c = random_circuit(5, 30, rng)
    a, b = zero_state(5), zero_state(5)
    execute(c, a)
    execute_on_backend(c, b)
    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_identity_circuit_leaves_mps_unchanged():
    mps = MpsState.zero_state(3)
    mps.apply_single_qubit(0, gate_matrix("H"))
    before = [t.copy() for t in mps.tensors]
    execute_on_backend(Circuit(3).identity(0).identity(2), mps)
    for t0, t1 in zip(before, mps.tensors):
        np.testing.assert_array_equal(t0, t1)


def test_qft_circuit_runs_on_both_backends():
    c = qft_circuit(5)
    dense = basis_state(5, 9)
    execute_on_backend(c, dense)
    mps = MpsState.basis_state(5, 9)
    execute_on_backend(c, mps)
    np.testing.assert_allclose(mps.to_dense().amplitudes, dense.amplitudes, atol=1e-10)


def test_mps_refuses_generic_three_qubit_gates(rng):
    q, _ = np.linalg.qr(rng.normal(size=(8, 8)))
    c = Circuit(3).append(Gate("U3q", (0, 1, 2), q))
    with pytest.raises(CapabilityError):
        execute_on_backend(c, MpsState.zero_state(3))
    s = zero_state(3)
    execute_on_backend(c, s)
    np.testing.assert_allclose(s.amplitudes, q[:, 0], atol=1e-12)
