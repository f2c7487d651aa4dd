import numpy as np
import pytest

from qot import linalg
from qot.linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    eig_hermitian,
    mat_exp,
    mat_log,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    partial_trace,
    pauli_compose,
    pauli_decompose,
    tensor,
    trace_norm,
)

rng = np.random.default_rng(1234)


def test_eig_identity_and_pauli():
    w, _ = eig_hermitian(np.eye(3))
    np.testing.assert_allclose(w, [1, 1, 1])
    w, _ = eig_hermitian(PAULI_X)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-14)


def test_eig_reconstruction_and_gram():
    for _ in range(20):
        A = linalg.random_hermitian(rng, 4)
        w, V = eig_hermitian(A)
        assert np.all(np.diff(w) >= -1e-14)
        resid = np.max(np.abs((V * w) @ V.conj().T - A))
        assert resid < 1e-10
        assert np.max(np.abs(V.conj().T @ V - np.eye(4))) < 1e-10


def test_op_norm_examples():
    assert op_norm(np.zeros((3, 3))) == 0.0
    assert abs(op_norm(PAULI_Y) - 1.0) < 1e-14
    assert abs(op_norm(np.array([[0, 2], [0, 0]])) - 2.0) < 1e-14


def test_op_norm_submultiplicative_and_unitary_invariant():
    for _ in range(1000):
        d = int(rng.integers(2, 5))
        A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        B = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        assert op_norm(A @ B) <= op_norm(A) * op_norm(B) + 1e-10
    for _ in range(50):
        d = int(rng.integers(2, 5))
        A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        U = linalg.random_unitary(rng, d)
        V = linalg.random_unitary(rng, d)
        assert abs(op_norm(U @ A @ V) - op_norm(A)) < 1e-10


def test_trace_norm_examples_and_bounds():
    psi = np.array([1.0, 0.0])
    rho = np.outer(psi, psi)
    assert abs(trace_norm(rho - np.eye(2) / 2) - 1.0) < 1e-12
    assert trace_norm(rho - rho) == 0.0
    assert abs(trace_norm(np.diag([0.75, 0.25]) - np.eye(2) / 2) - 0.5) < 1e-12
    for _ in range(100):
        d = int(rng.integers(2, 6))
        A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        assert trace_norm(A) >= op_norm(A) - 1e-10
        assert trace_norm(A) <= d * op_norm(A) + 1e-10


def test_tensor():
    A = linalg.random_hermitian(rng, 3)
    assert np.allclose(tensor(A, np.eye(1)), A)
    assert abs(op_norm(tensor(PAULI_X, PAULI_X)) - 1.0) < 1e-12
    B = linalg.random_hermitian(rng, 2)
    assert abs(np.trace(tensor(A, B)) - np.trace(A) * np.trace(B)) < 1e-10


def test_partial_trace():
    rho = linalg.random_mixed_state(rng, 2)
    tau = linalg.random_mixed_state(rng, 3)
    np.testing.assert_allclose(partial_trace(tensor(rho, tau), (2, 3), "B"), rho, atol=1e-12)
    B = linalg.random_hermitian(rng, 3)
    np.testing.assert_allclose(partial_trace(tensor(np.eye(2), B), (2, 3), "A"), 2 * B, atol=1e-12)
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    np.testing.assert_allclose(
        partial_trace(np.outer(bell, bell.conj()), (2, 2), "B"), np.eye(2) / 2, atol=1e-12
    )
    M = linalg.random_hermitian(rng, 6)
    assert abs(np.trace(partial_trace(M, (2, 3), "B")) - np.trace(M)) < 1e-10
    with pytest.raises(ValueError):
        partial_trace(M, (2, 2), "B")


def test_mat_log_exp():
    np.testing.assert_allclose(mat_log(np.eye(3)), np.zeros((3, 3)), atol=1e-12)
    np.testing.assert_allclose(
        mat_log(np.diag([np.e, np.e**2])), np.diag([1.0, 2.0]), atol=1e-12
    )
    for _ in range(20):
        rho = linalg.random_mixed_state(rng, 3, floor=0.05)
        np.testing.assert_allclose(mat_exp(mat_log(rho)), rho, atol=1e-9)
    with pytest.raises(ValueError, match="smallest"):
        mat_log(np.diag([1.0, 0.0]))


def test_pauli_decompose():
    assert pauli_decompose(PAULI_Z) == (0, 0, 0, 1)
    assert pauli_decompose(np.eye(2)) == (1, 0, 0, 0)
    np.testing.assert_allclose(pauli_decompose(np.diag([0.75, 0.25])), (0.5, 0, 0, 0.25))
    for _ in range(20):
        X = linalg.random_hermitian(rng, 2)
        np.testing.assert_allclose(pauli_compose(*pauli_decompose(X)), X, atol=1e-12)


def test_hermiticity_rejected_not_symmetrized():
    bad = np.array([[1.0, 1e-6], [0.0, 2.0]])
    with pytest.raises(ValueError, match="not Hermitian"):
        linalg.require_hermitian(bad)


def test_density_validation():
    with pytest.raises(ValueError, match="trace"):
        linalg.require_density(np.eye(2))
    with pytest.raises(ValueError, match="negative eigenvalue"):
        linalg.require_density(np.diag([1.5, -0.5]))


def test_hermitian_basis_orthonormal():
    for d in (2, 3, 4):
        B = linalg.hermitian_basis(d)
        G = np.einsum("aij,bji->ab", B, B)
        np.testing.assert_allclose(G, np.eye(d * d), atol=1e-12)
        X = linalg.random_hermitian(rng, d)
        c = linalg.to_coords(X, B)
        assert np.max(np.abs(c.imag)) if np.iscomplexobj(c) else True
        np.testing.assert_allclose(linalg.from_coords(c, B), X, atol=1e-12)


def test_matrix_json_round_trip():
    M = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    np.testing.assert_allclose(matrix_from_json(matrix_to_json(M)), M)
    with pytest.raises(ValueError, match="data length"):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})
