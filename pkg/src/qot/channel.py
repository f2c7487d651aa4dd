"""Quantum channels in Kraus form, conditional expectations, Choi order, index.

Conventions: for a Kraus family {K}, the Heisenberg action is
X -> sum K^dag X K and the Schrodinger action is rho -> sum K rho K^dag.
``is_trace_preserving`` records sum K^dag K = 1 (equivalently the Heisenberg
action is unital); ``is_unital`` records sum K K^dag = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .linalg import (
    as_complex_matrix,
    dagger,
    hermitian_basis,
    hermitian_part,
    matrix_from_json,
    matrix_to_json,
    require_density,
    require_hermitian,
    to_coords,
)
from .seminorm import ResourceSet, commutant

CP_TOL = 1e-10
PICTURE_TOL = 1e-10


def _kraus_stack(kraus) -> np.ndarray:
    K = np.stack([as_complex_matrix(k) for k in kraus])
    if K.shape[1] != K.shape[2]:
        raise ValueError("Kraus operators must be square")
    return K


@dataclass
class QuantumChannel:
    """Kraus-operator bundle carrying both pictures."""

    dim: int
    kraus: list[np.ndarray]
    is_trace_preserving: bool = field(init=False)
    is_unital: bool = field(init=False)

    def __post_init__(self) -> None:
        K = _kraus_stack(self.kraus)
        if K.shape[1] != self.dim:
            raise ValueError(f"Kraus dimension {K.shape[1]} != dim {self.dim}")
        self.kraus = list(K)
        eye = np.eye(self.dim)
        self.is_trace_preserving = bool(
            np.max(np.abs(np.einsum("kji,kjl->il", K.conj(), K) - eye)) <= PICTURE_TOL
        )
        self.is_unital = bool(
            np.max(np.abs(np.einsum("kij,klj->il", K, K.conj()) - eye)) <= PICTURE_TOL
        )
        if not (self.is_trace_preserving or self.is_unital):
            raise ValueError("Kraus family is neither trace preserving nor unital")
        lo = float(np.linalg.eigvalsh(self.choi())[0])
        if lo < -CP_TOL:
            raise ValueError(f"Choi matrix has eigenvalue {lo:.3e}; map is not completely positive")

    def heisenberg(self, X) -> np.ndarray:
        M = as_complex_matrix(X)
        if M.shape != (self.dim, self.dim):
            raise ValueError(f"operator of shape {M.shape} does not match channel dim {self.dim}")
        K = np.stack(self.kraus)
        return np.einsum("kji,jl,klm->im", K.conj(), M, K)

    def schrodinger(self, rho) -> np.ndarray:
        M = as_complex_matrix(rho)
        if M.shape != (self.dim, self.dim):
            raise ValueError(f"state of shape {M.shape} does not match channel dim {self.dim}")
        K = np.stack(self.kraus)
        return np.einsum("kij,jl,kml->im", K, M, K.conj())

    def adjoint(self) -> "QuantumChannel":
        """Swap pictures: the Kraus family of daggers."""
        return QuantumChannel(self.dim, [dagger(k) for k in self.kraus])

    def choi(self) -> np.ndarray:
        """Choi matrix of the Schrodinger action, shape (d^2, d^2)."""
        w = np.stack([k.T.reshape(-1) for k in self.kraus])
        return hermitian_part(np.einsum("ka,kb->ab", w, w.conj()))

    def schro_superop(self) -> np.ndarray:
        """Row-major-vec superoperator of the Schrodinger action."""
        K = np.stack(self.kraus)
        return np.einsum("kij,klm->iljm", K, K.conj()).reshape(self.dim**2, self.dim**2)

    def as_map(self) -> "MatrixMap":
        return MatrixMap(self.dim, self.schro_superop())

    def to_json(self) -> dict:
        return {"dim": self.dim, "kraus": [matrix_to_json(k) for k in self.kraus]}


def channel_from_json(obj: dict) -> QuantumChannel:
    return QuantumChannel(int(obj["dim"]), [matrix_from_json(m) for m in obj["kraus"]])


@dataclass
class MatrixMap:
    """Linear map on M_d stored as a Schrodinger-picture superoperator.

    Used for channel iterates (avoids Kraus blow-up) and for non-CP maps such
    as the BKM dual.  The Heisenberg action is the Hilbert-Schmidt adjoint.
    """

    dim: int
    schro_mat: np.ndarray

    def __post_init__(self) -> None:
        S = as_complex_matrix(self.schro_mat)
        if S.shape != (self.dim**2, self.dim**2):
            raise ValueError("superoperator shape does not match dim")
        self.schro_mat = S

    def schrodinger(self, rho) -> np.ndarray:
        v = as_complex_matrix(rho).reshape(-1)
        return (self.schro_mat @ v).reshape(self.dim, self.dim)

    def heisenberg(self, X) -> np.ndarray:
        v = as_complex_matrix(X).reshape(-1)
        return (self.schro_mat.conj().T @ v).reshape(self.dim, self.dim)

    def power(self, n: int) -> "MatrixMap":
        if n < 0:
            raise ValueError("power must be nonnegative")
        return MatrixMap(self.dim, np.linalg.matrix_power(self.schro_mat, n))

    def choi(self) -> np.ndarray:
        return choi(self)

    def schro_superop(self) -> np.ndarray:
        return self.schro_mat


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel(d, [np.eye(d, dtype=complex)])


def _weyl_operators(d: int) -> list[np.ndarray]:
    w = np.exp(2j * np.pi / d)
    X = np.zeros((d, d), dtype=complex)
    for j in range(d):
        X[(j + 1) % d, j] = 1
    Z = np.diag(w ** np.arange(d)).astype(complex)
    return [np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b) for a in range(d) for b in range(d)]


def depolarizing_channel(d: int, p: float) -> QuantumChannel:
    """rho -> (1-p) rho + p tr(rho) I/d, via the Weyl-twirl Kraus family."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing parameter must lie in [0,1], got {p}")
    kraus = []
    for idx, W in enumerate(_weyl_operators(d)):
        c = math.sqrt(1 - p + p / d**2) if idx == 0 else math.sqrt(p) / d
        if c > 0:
            kraus.append(c * W)
    return QuantumChannel(d, kraus)


def unitary_channel(U) -> QuantumChannel:
    M = as_complex_matrix(U)
    d = M.shape[0]
    if np.max(np.abs(dagger(M) @ M - np.eye(d))) > 1e-10:
        raise ValueError("matrix is not unitary within 1e-10")
    return QuantumChannel(d, [M])


def replacer_channel(sigma) -> QuantumChannel:
    """rho -> tr(rho) sigma."""
    S = require_density(sigma)
    d = S.shape[0]
    w, V = np.linalg.eigh(S)
    kraus = []
    for i in range(d):
        if w[i] <= 1e-15:
            continue
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[:, j] = math.sqrt(max(w[i], 0.0)) * V[:, i]
            kraus.append(k)
    return QuantumChannel(d, kraus)


def pauli_channel(px: float, py: float, pz: float) -> QuantumChannel:
    if min(px, py, pz) < 0 or px + py + pz > 1 + 1e-12:
        raise ValueError("Pauli weights must be nonnegative with px+py+pz <= 1")
    p0 = max(1.0 - px - py - pz, 0.0)
    kraus = []
    for c, P in zip(
        (p0, px, py, pz),
        (np.eye(2, dtype=complex), linalg.PAULI_X, linalg.PAULI_Y, linalg.PAULI_Z),
    ):
        if c > 0:
            kraus.append(math.sqrt(c) * P)
    return QuantumChannel(2, kraus)


def mix_channels(weighted: list[tuple[float, QuantumChannel]]) -> QuantumChannel:
    """Convex combination sum p_i Phi_i as one Kraus family."""
    if abs(sum(p for p, _ in weighted) - 1.0) > 1e-10:
        raise ValueError("mixture weights must sum to 1")
    d = weighted[0][1].dim
    kraus = []
    for p, ch in weighted:
        if ch.dim != d:
            raise ValueError("mixture channels must share a dimension")
        if p < 0:
            raise ValueError("mixture weights must be nonnegative")
        kraus.extend(math.sqrt(p) * k for k in ch.kraus)
    return QuantumChannel(d, kraus)


def compose(phi: QuantumChannel, psi: QuantumChannel) -> QuantumChannel:
    """Channel with Schrodinger action phi_* after psi_* (Kraus products)."""
    if phi.dim != psi.dim:
        raise ValueError("composition requires equal dimensions")
    kraus = [a @ b for a in phi.kraus for b in psi.kraus]
    return QuantumChannel(phi.dim, kraus)


def tensor_channel(phi: QuantumChannel, psi: QuantumChannel) -> QuantumChannel:
    kraus = [np.kron(a, b) for a in phi.kraus for b in psi.kraus]
    return QuantumChannel(phi.dim * psi.dim, kraus)


def amplify(phi: QuantumChannel, n: int) -> QuantumChannel:
    """id_{M_n} (x) phi."""
    if n < 1:
        raise ValueError("amplification must be >= 1")
    if n == 1:
        return phi
    return tensor_channel(identity_channel(n), phi)


# ---------------------------------------------------------------------------
# Choi matrices and the completely-positive order


def choi(map_like) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) T(|i><j|) of the Schrodinger action."""
    if isinstance(map_like, QuantumChannel):
        return map_like.choi()
    d = map_like.dim
    C = np.zeros((d * d, d * d), dtype=complex)
    E = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            E[i, j] = 1.0
            T = map_like.schrodinger(E)
            C[i * d : (i + 1) * d, j * d : (j + 1) * d] = T
            E[i, j] = 0.0
    # reorder: built as blocks (i,j) holding T(E_ij) = correct kron layout already
    return C


def is_cp_order(map_a, map_b, tol: float = 1e-9) -> bool:
    """True iff map_a <=_cp map_b, i.e. Choi(b - a) is PSD within -tol."""
    Ca = choi(map_a) if not isinstance(map_a, np.ndarray) else map_a
    Cb = choi(map_b) if not isinstance(map_b, np.ndarray) else map_b
    lo = float(np.linalg.eigvalsh(hermitian_part(Cb - Ca))[0])
    return lo >= -tol


def kraus_from_choi(C: np.ndarray, dim: int, tol: float = 1e-10) -> list[np.ndarray]:
    w, V = np.linalg.eigh(hermitian_part(C))
    if w[0] < -max(tol, 1e-9) * max(1.0, float(w[-1])):
        raise ValueError(f"Choi matrix is not PSD (eigenvalue {w[0]:.3e})")
    kraus = []
    for i in range(len(w) - 1, -1, -1):
        if w[i] <= max(tol, 0.0) * max(1.0, float(w[-1])):
            break
        vec = math.sqrt(w[i]) * V[:, i]
        kraus.append(vec.reshape(dim, dim).T.copy())
    return kraus


# ---------------------------------------------------------------------------
# conditional expectations onto commutants


@dataclass
class ConditionalExpectation:
    """Trace-preserving conditional expectation = HS projection onto the commutant."""

    dim: int
    basis_fix: list[np.ndarray]

    def apply(self, X) -> np.ndarray:
        M = as_complex_matrix(X)
        out = np.zeros_like(M)
        for B in self.basis_fix:
            out += B * np.trace(B @ M)
        return out

    # the HS projection is self-adjoint: both pictures coincide
    def heisenberg(self, X) -> np.ndarray:
        return self.apply(X)

    def schrodinger(self, rho) -> np.ndarray:
        return self.apply(rho)

    def schro_superop(self) -> np.ndarray:
        d = self.dim
        S = np.zeros((d * d, d * d), dtype=complex)
        for B in self.basis_fix:
            v = B.reshape(-1)
            S += np.outer(v, v.conj())
        return S

    def as_map(self) -> MatrixMap:
        return MatrixMap(self.dim, self.schro_superop())

    @cached_property
    def channel(self) -> QuantumChannel:
        return QuantumChannel(self.dim, kraus_from_choi(choi(self.as_map()), self.dim))


def conditional_expectation(resource: ResourceSet) -> ConditionalExpectation:
    basis = commutant(resource)
    return ConditionalExpectation(resource.dim, basis)


# ---------------------------------------------------------------------------
# index of a conditional expectation


@dataclass
class IndexReport:
    formula_value: float | None
    formula_cb: float | None
    numeric_lower: float
    samples: int
    seed: int


def index(
    efix: ConditionalExpectation,
    block_structure: list[tuple[int, int]] | None = None,
    samples: int = 2000,
    seed: int = 0,
) -> IndexReport:
    """Index of a conditional expectation: smallest c with x^dag x <= c E(x^dag x).

    With ``block_structure`` [(dim_H_i, dim_K_i), ...] describing the fixed
    algebra (+) B(H_i) (x) 1_{K_i}, the tracial closed forms are
    sum min(dH, dK) dK and sum dK^2.  The numeric side is a sampled lower
    bound on the true index.
    """
    formula = formula_cb = None
    if block_structure is not None:
        total = sum(dh * dk for dh, dk in block_structure)
        if total != efix.dim:
            raise ValueError(
                f"block structure dims sum to {total}, ambient dim is {efix.dim}"
            )
        herm_dim = sum(dh * dh for dh, dk in block_structure)
        if herm_dim != len(efix.basis_fix):
            raise ValueError(
                f"block structure implies fixed-algebra dimension {herm_dim}, "
                f"conditional expectation has {len(efix.basis_fix)}"
            )
        formula = float(sum(min(dh, dk) * dk for dh, dk in block_structure))
        formula_cb = float(sum(dk * dk for _, dk in block_structure))

    rng = np.random.default_rng([0x1D8, seed & 0xFFFFFFFF])
    d = efix.dim
    lower = 0.0
    for _ in range(samples):
        x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        xx = dagger(x) @ x
        G = hermitian_part(efix.apply(xx))
        w, V = np.linalg.eigh(G)
        keep = w > 1e-12 * max(float(w[-1]), 1e-30)
        Vs = V[:, keep]
        ws = w[keep]
        # x^dag x must be supported where E(x^dag x) is; compare on that support
        A = dagger(Vs) @ xx @ Vs
        M = A / np.sqrt(ws)[:, None] / np.sqrt(ws)[None, :]
        lower = max(lower, float(np.linalg.eigvalsh(hermitian_part(M))[-1]))
    return IndexReport(formula, formula_cb, lower, samples, seed)


# ---------------------------------------------------------------------------
# CLI channel grammar


def channel_from_spec(text: str) -> QuantumChannel:
    """Parse "depolarizing:d:p", "unitary:file", "replacer:file", "pauli:px:py:pz",
    "identity:d", or a path to channel JSON."""
    try:
        if text.startswith("depolarizing:"):
            _, d, p = text.split(":")
            return depolarizing_channel(int(d), float(p))
        if text.startswith("identity:"):
            return identity_channel(int(text.split(":", 1)[1]))
        if text.startswith("unitary:"):
            with open(text.split(":", 1)[1]) as fh:
                return unitary_channel(matrix_from_json(json.load(fh)))
        if text.startswith("replacer:"):
            with open(text.split(":", 1)[1]) as fh:
                return replacer_channel(matrix_from_json(json.load(fh)))
        if text.startswith("pauli:"):
            _, px, py, pz = text.split(":")
            return pauli_channel(float(px), float(py), float(pz))
    except (TypeError, IndexError):
        raise ValueError(f"malformed channel spec '{text}'") from None
    except ValueError as exc:
        raise ValueError(f"malformed channel spec '{text}': {exc}") from None
    with open(text) as fh:
        return channel_from_json(json.load(fh))
