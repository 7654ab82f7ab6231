import numpy as np
import pytest

from vqsvm.statevector import (RawVector, StateVector, ZeroNormError, apply_matrix,
                               inner_product, n_qubits_of, normalize,
                               pad_to_power_of_two, read_matrix, read_vector,
                               write_matrix, write_vector)


def test_inner_product_identity():
    zero = StateVector.basis(1, 0)
    assert inner_product(zero, zero) == 1.0


def test_inner_product_orthogonal():
    assert inner_product(StateVector.basis(1, 0), StateVector.basis(1, 1)) == 0.0


def test_inner_product_superposition():
    plus = StateVector.of([2**-0.5, 2**-0.5])
    got = inner_product(plus, StateVector.basis(1, 1))
    assert abs(got - 2**-0.5) < 1e-15


def test_inner_product_conjugates_left_argument():
    a = RawVector.of([1j, 0.0])
    b = RawVector.of([1.0, 0.0])
    assert inner_product(a, b) == pytest.approx(-1j)


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError):
        inner_product(StateVector.basis(1, 0), StateVector.basis(2, 0))


def test_inner_product_is_squared_norm():
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = RawVector.of(rng.normal(size=8) + 1j * rng.normal(size=8))
        ip = inner_product(v, v)
        assert abs(ip.imag) < 1e-12
        assert ip.real >= 0.0
        assert abs(ip.real - v.norm() ** 2) < 1e-12


def test_apply_matrix_identity():
    v = RawVector.of([1.0, 2.0, 3.0, 4.0])
    out = apply_matrix(np.eye(4), v)
    np.testing.assert_allclose(out.amps, v.amps)


def test_apply_matrix_pauli_x():
    out = apply_matrix(np.array([[0, 1], [1, 0]]), RawVector.of([1.0, 0.0]))
    np.testing.assert_allclose(out.amps, [0.0, 1.0])


def test_apply_matrix_hand_product():
    out = apply_matrix(np.array([[0, 1], [1, 2]]), RawVector.of([0.0, 1.0]))
    np.testing.assert_allclose(out.amps, [1.0, 2.0])


def test_apply_matrix_linearity():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    u = rng.normal(size=8) + 1j * rng.normal(size=8)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    a, b = 0.3 - 1.1j, 2.5 + 0.2j
    lhs = apply_matrix(m, RawVector.of(a * u + b * v)).amps
    rhs = a * apply_matrix(m, RawVector.of(u)).amps + b * apply_matrix(m, RawVector.of(v)).amps
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_apply_matrix_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_matrix(np.eye(4), RawVector.of([1.0, 0.0]))


def test_normalize_three_four():
    state, norm = normalize(RawVector.of([3.0, 4.0]))
    np.testing.assert_allclose(state.amps, [0.6, 0.8])
    assert norm == 5.0


def test_normalize_unit_vector():
    state, norm = normalize(RawVector.of([1.0, 0.0]))
    np.testing.assert_allclose(state.amps, [1.0, 0.0])
    assert norm == 1.0


def test_normalize_zero_vector():
    with pytest.raises(ZeroNormError):
        normalize(RawVector.of([0.0, 0.0]))


def test_state_vector_rejects_unnormalized():
    with pytest.raises(ValueError):
        StateVector.of([1.0, 1.0])


def test_state_vector_rejects_bad_length():
    with pytest.raises(ValueError):
        StateVector.of([1.0, 0.0, 0.0])


def test_basis_state_indexing():
    s = StateVector.basis(3, 6)
    assert s.amps[6] == 1.0
    assert np.count_nonzero(s.amps) == 1


def test_pad_power_of_two_noop():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    padded, rhs = pad_to_power_of_two(m, [5.0, 6.0])
    np.testing.assert_allclose(padded, m)
    np.testing.assert_allclose(rhs.amps, [5.0, 6.0])
    assert rhs.n_qubits == 1


def test_pad_three_to_four():
    padded, rhs = pad_to_power_of_two(np.eye(3), [1.0, 1.0, 1.0])
    np.testing.assert_allclose(padded, np.eye(4))
    np.testing.assert_allclose(rhs.amps, [1.0, 1.0, 1.0, 0.0])


def test_pad_preserves_solutions():
    rng = np.random.default_rng(2)
    for d in range(2, 9):
        m = rng.normal(size=(d, d)) + np.eye(d) * d  # well conditioned
        y = rng.normal(size=d)
        x = np.linalg.solve(m, y)
        padded, rhs = pad_to_power_of_two(m, y)
        x_padded = np.linalg.solve(padded, rhs.amps)
        np.testing.assert_allclose(x_padded[:d], x, atol=1e-9)
        np.testing.assert_allclose(x_padded[d:], 0.0, atol=1e-9)


def test_matrix_file_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    path = tmp_path / "m.mat"
    write_matrix(m, path)
    np.testing.assert_array_equal(read_matrix(path), m)


def test_vector_file_round_trip(tmp_path):
    v = RawVector.of([1.5, -2.25e-7 + 3j])
    path = tmp_path / "v.vec"
    write_vector(v, path)
    got = read_vector(path)
    np.testing.assert_array_equal(got.amps, v.amps)
    assert got.n_qubits == 1


def test_matrix_file_bad_header(tmp_path):
    path = tmp_path / "bad.mat"
    path.write_text("Q 2\n1 0\n0 1\n")
    with pytest.raises(ValueError, match="line 1"):
        read_matrix(path)


def test_matrix_file_bad_entry(tmp_path):
    path = tmp_path / "bad.mat"
    path.write_text("N 1\n1+0j spam\n0+0j 1+0j\n")
    with pytest.raises(ValueError, match="line 2"):
        read_matrix(path)


def test_matrix_file_wrong_row_count(tmp_path):
    path = tmp_path / "bad.mat"
    path.write_text("N 2\n1 0 0 0\n")
    with pytest.raises(ValueError, match="4 rows"):
        read_matrix(path)
