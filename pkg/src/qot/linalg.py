"""Dense complex linear algebra kernel.

Everything downstream works with plain ``numpy`` complex arrays.  This module
collects the validated entry points: Hermitian eigendecompositions, operator
and trace norms, Kronecker/partial-trace plumbing, matrix functions through
functional calculus, Pauli coordinates and the orthonormal Hermitian operator
basis used for real superoperator coordinates.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


class NumericalFailureError(RuntimeError):
    """Raised when an iterative kernel (eigensolver) fails to converge."""


def as_complex_matrix(A) -> np.ndarray:
    """Validate and return ``A`` as a finite 2-d complex array."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {M.shape}")
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(M.imag)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return M


def dagger(A: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(A, -1, -2))


def hermitian_defect(A: np.ndarray) -> float:
    """Largest entrywise mismatch between A and its conjugate transpose."""
    return float(np.max(np.abs(A - dagger(A)))) if A.size else 0.0


def require_hermitian(A, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity; inputs beyond ``tol`` are rejected, not symmetrized."""
    M = as_complex_matrix(A)
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"Hermitian matrix must be square, got {M.shape}")
    defect = hermitian_defect(M)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian: max entry mismatch {defect:.3e} > {tol:.0e}")
    return M


def hermitian_part(A: np.ndarray) -> np.ndarray:
    return (A + dagger(A)) / 2


def require_density(rho, trace_tol: float = 1e-10, eig_tol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, eigenvalues >= -eig_tol."""
    M = require_hermitian(rho)
    tr = float(np.trace(M).real)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix must have trace 1, got {tr}")
    lo = float(np.linalg.eigvalsh(M)[0])
    if lo < -eig_tol:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return M


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns


def eig_hermitian(A) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    M = require_hermitian(A)
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        resid = hermitian_defect(M)
        raise NumericalFailureError(
            f"Hermitian eigensolver did not converge (off-diagonal residual {resid:.3e})"
        ) from exc
    return EigenDecomposition(w, V)


def op_norm(M) -> float:
    """Operator norm = largest singular value."""
    A = as_complex_matrix(M)
    if not A.size:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def trace_norm(M) -> float:
    """Trace norm = sum of singular values."""
    A = as_complex_matrix(M)
    if not A.size:
        return 0.0
    return float(np.sum(np.linalg.svd(A, compute_uv=False)))


def tensor(A, B) -> np.ndarray:
    """Kronecker product."""
    return np.kron(as_complex_matrix(A), as_complex_matrix(B))


def partial_trace(M, dims: tuple[int, int], side: str) -> np.ndarray:
    """Partial trace of a matrix on a bipartite space of dimensions ``dims``.

    ``side`` names the factor that is traced out: "A" keeps the second factor,
    "B" keeps the first.
    """
    dA, dB = dims
    X = as_complex_matrix(M)
    if X.shape != (dA * dB, dA * dB):
        raise ValueError(f"matrix of shape {X.shape} does not match dims {dims}")
    T = X.reshape(dA, dB, dA, dB)
    if side == "A":
        return np.einsum("abac->bc", T)
    if side == "B":
        return np.einsum("abcb->ac", T)
    raise ValueError("side must be 'A' or 'B'")


def mat_exp(A) -> np.ndarray:
    """exp(A) for Hermitian A via functional calculus."""
    w, V = eig_hermitian(A)
    return hermitian_part((V * np.exp(w)) @ dagger(V))


def mat_log(A, min_eig: float = 1e-12) -> np.ndarray:
    """log(A) for a strictly positive Hermitian A."""
    w, V = eig_hermitian(A)
    if w[0] <= min_eig:
        raise ValueError(f"matrix log requires eigenvalues > {min_eig:.0e}, smallest is {w[0]:.3e}")
    return hermitian_part((V * np.log(w)) @ dagger(V))


def pauli_decompose(X) -> tuple[float, float, float, float]:
    """Coordinates (v0, v1, v2, v3) with X = v0*I + v1*sx + v2*sy + v3*sz."""
    M = require_hermitian(X)
    if M.shape != (2, 2):
        raise ValueError("pauli_decompose expects a 2x2 Hermitian matrix")
    v0 = float(np.trace(M).real) / 2
    vs = tuple(float(np.trace(P @ M).real) / 2 for P in PAULIS)
    return (v0, *vs)


def pauli_compose(v0: float, v1: float, v2: float, v3: float) -> np.ndarray:
    return v0 * np.eye(2, dtype=complex) + v1 * PAULI_X + v2 * PAULI_Y + v3 * PAULI_Z


def hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) Hermitian basis of M_d, shape (d*d, d, d).

    Element 0 is I/sqrt(d); then symmetric/antisymmetric off-diagonal pairs;
    then traceless diagonal elements (generalized Gell-Mann convention).
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    out = np.zeros((d * d, d, d), dtype=complex)
    out[0] = np.eye(d) / np.sqrt(d)
    k = 1
    for i in range(d):
        for j in range(i + 1, d):
            S = np.zeros((d, d), dtype=complex)
            S[i, j] = S[j, i] = 1 / np.sqrt(2)
            out[k] = S
            k += 1
            T = np.zeros((d, d), dtype=complex)
            T[i, j] = -1j / np.sqrt(2)
            T[j, i] = 1j / np.sqrt(2)
            out[k] = T
            k += 1
    for m in range(1, d):
        D = np.zeros((d, d), dtype=complex)
        D[np.arange(m), np.arange(m)] = 1
        D[m, m] = -m
        out[k] = D / np.sqrt(m * (m + 1))
        k += 1
    return out


def to_coords(X: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Real coordinates of Hermitian X (or a stack of them) in a Hermitian basis."""
    return np.real(np.einsum("kij,...ji->...k", basis, X))


def from_coords(c: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Matrix (or stack) from real coordinates in a Hermitian basis."""
    return np.tensordot(np.asarray(c, dtype=float), basis, axes=([-1], [0]))


# ---------------------------------------------------------------------------
# seeded random constructions (used by estimators and tests)


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return hermitian_part(G) * scale


def random_pure_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_mixed_state(rng: np.random.Generator, d: int, floor: float = 0.0) -> np.ndarray:
    """Haar-induced mixed state (partial trace of a pure state on d*d), optionally floored."""
    v = rng.standard_normal(d * d) + 1j * rng.standard_normal(d * d)
    v /= np.linalg.norm(v)
    rho = partial_trace(np.outer(v, v.conj()), (d, d), side="B")
    rho = hermitian_part(rho)
    if floor > 0.0:
        rho = (1 - floor) * rho + floor * np.eye(d) / d
    return rho


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-ish unitary as exp(i H) of a random Hermitian."""
    H = random_hermitian(rng, d)
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * w)) @ dagger(V)


# ---------------------------------------------------------------------------
# matrix JSON encoding used repo-wide


def matrix_to_json(M) -> dict:
    A = as_complex_matrix(M)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in A.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: missing field {exc}") from exc
    if len(data) != rows * cols:
        raise ValueError(f"matrix JSON data length {len(data)} != rows*cols = {rows * cols}")
    flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    return flat.reshape(rows, cols)
