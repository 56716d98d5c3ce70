from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcsim.dense import MAX_QUBITS, DenseState, basis_state, inner_product, probabilities, zero_state
from qcsim.errors import BoundsError, DimensionError, SizeError


@pytest.mark.parametrize("n", [1, 2, 3])
def test_zero_state_is_first_basis_vector(n):
    expected = np.zeros(1 << n)
    expected[0] = 1
    np.testing.assert_array_equal(zero_state(n).amplitudes, expected)


@pytest.mark.parametrize("n", [0, -1, MAX_QUBITS + 1])
def test_zero_state_rejects_bad_width(n):
    with pytest.raises(SizeError):
        zero_state(n)


def test_width_cap_is_configurable():
    with pytest.raises(SizeError):
        DenseState.zero_state(5, max_qubits=4)
    assert DenseState.zero_state(4, max_qubits=4).dim == 16


def test_basis_state_uses_msb_first_labels():
    # |110>: qubit 0 and 1 set, qubit 2 clear
    s = basis_state(3, 6)
    assert s.amplitudes[0b110] == 1
    assert np.count_nonzero(s.amplitudes) == 1
    np.testing.assert_array_equal(basis_state(2, 0).amplitudes, [1, 0, 0, 0])
    np.testing.assert_array_equal(basis_state(1, 1).amplitudes, [0, 1])


@pytest.mark.parametrize("index", [-1, 8, 100])
def test_basis_state_out_of_range(index):
    with pytest.raises(BoundsError):
        basis_state(3, index)


def test_inner_product_examples(rng):
    psi = DenseState.random(4, rng)
    assert abs(inner_product(psi, psi) - 1) < 1e-12
    assert inner_product(basis_state(2, 0), basis_state(2, 3)) == 0
    plus = DenseState.from_amplitudes([1, 1], normalize=True)
    np.testing.assert_allclose(inner_product(plus, zero_state(1)), 1 / np.sqrt(2), atol=1e-15)


def test_inner_product_is_conjugate_linear_in_the_bra(rng):
    a, b = DenseState.random(3, rng), DenseState.random(3, rng)
    np.testing.assert_allclose(inner_product(a, b), np.conj(inner_product(b, a)), atol=1e-15)
    np.testing.assert_allclose(inner_product(a, b), np.sum(np.conj(a.amplitudes) * b.amplitudes), atol=1e-15)


def test_inner_product_size_mismatch():
    with pytest.raises(DimensionError):
        inner_product(zero_state(2), zero_state(3))


def test_probabilities_examples():
    np.testing.assert_array_equal(probabilities(zero_state(1)), [1, 0])
    bell = DenseState.from_amplitudes([1, 0, 0, 1], normalize=True)
    np.testing.assert_allclose(probabilities(bell), [0.5, 0, 0, 0.5], atol=1e-15)
    uniform = DenseState(np.full(8, 1 / np.sqrt(8)), 3)
    np.testing.assert_allclose(probabilities(uniform), np.full(8, 0.125), atol=1e-15)


@given(n=st.integers(1, 6), data=st.data())
def test_basis_state_probabilities_are_unit_vectors(n, data):
    i = data.draw(st.integers(0, (1 << n) - 1))
    p = probabilities(basis_state(n, i))
    expected = np.zeros(1 << n)
    expected[i] = 1.0
    np.testing.assert_array_equal(p, expected)


@settings(max_examples=30)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_random_states_are_normalized(n, seed):
    s = DenseState.random(n, np.random.default_rng(seed))
    assert abs(probabilities(s).sum() - 1) < 1e-12


def test_constructor_checks_length():
    with pytest.raises(DimensionError):
        DenseState(np.zeros(3, dtype=complex), 2)
    with pytest.raises(DimensionError):
        DenseState.from_amplitudes([1, 0, 0])


def test_dump_format():
    s = DenseState(np.array([1 / np.sqrt(2), 0, 0, 1j / np.sqrt(2)]), 2)
    lines = s.dumps().splitlines()
    assert len(lines) == 4
    assert lines[0] == f"0\t{1 / np.sqrt(2):.17g}\t0"
    idx, re, im = lines[3].split("\t")
    assert idx == "3" and float(re) == 0 and float(im) == 1 / np.sqrt(2)


def test_memory_estimate_counts_complex_doubles():
    assert zero_state(10).memory_estimate() == 16 * 1024


def test_check_qubit():
    s = zero_state(3)
    s.check_qubit(2)
    with pytest.raises(BoundsError):
        s.check_qubit(3)
