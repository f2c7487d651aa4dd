"""Seeded multi-restart supergradient ascent for ratio objectives.

All supremum-type quantities in this package have the shape
``sup N(X) / D(X)`` over Hermitian ``X`` in a real coordinate subspace, with
``N`` and ``D`` positively homogeneous (operator norms, commutator seminorms,
linear pairings).  The engine below runs batched restarts of projected
supergradient ascent on the coordinate sphere, tracks the best witness, and
finishes with a derivative-free polish.  Results are deterministic for a
fixed seed: restarts are vectorized and reduced by max.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import dagger, from_coords, hermitian_part, to_coords


@dataclass
class AscentOptions:
    restarts: int = 64
    iterations: int = 300
    step: float = 0.1  # step/sqrt(t) schedule
    polish_rounds: int = 16
    polish_batch: int = 32

    def scaled(self, restarts: int | None = None, iterations: int | None = None) -> "AscentOptions":
        return AscentOptions(
            restarts=self.restarts if restarts is None else restarts,
            iterations=self.iterations if iterations is None else iterations,
            step=self.step,
            polish_rounds=self.polish_rounds,
            polish_batch=self.polish_batch,
        )


@dataclass
class AscentResult:
    value: float
    witness_coords: np.ndarray  # coords in the full Hermitian basis, shape (D*D,)
    restart_bests: np.ndarray
    spread: float  # max - min over restart bests
    stagnation_gap: float  # heuristic relative gap (1e-4 confident, 1e-2 not)


# ---------------------------------------------------------------------------
# batched norm terms: each returns (values, gradient matrices)


def opnorm_hermitian_batch(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Operator norm and supergradient for a stack of Hermitian matrices.

    Returns values (R,) and Hermitian gradients (R, D, D) with
    d||M|| = <G, dM>_HS along Hermitian perturbations.
    """
    w, V = np.linalg.eigh(M)
    pick_hi = np.abs(w[:, -1]) >= np.abs(w[:, 0])
    idx = np.where(pick_hi, M.shape[-1] - 1, 0)
    rows = np.arange(M.shape[0])
    vals = np.abs(w[rows, idx])
    u = V[rows, :, idx]
    sign = np.sign(w[rows, idx])
    sign[sign == 0] = 1.0
    G = sign[:, None, None] * (u[:, :, None] * u.conj()[:, None, :])
    return vals, G


def _top_singular_grad(C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Top singular value and gradient u v^dag for a stack of matrices."""
    U, s, Vh = np.linalg.svd(C)
    u = U[..., :, 0]
    v = dagger(Vh)[..., :, 0]
    G = u[..., :, None] * v.conj()[..., None, :]
    return s[..., 0], G


def _pullback_commutator(G: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Hermitian gradient of X -> f([s, X]) given the gradient G wrt the commutator."""
    Gd = dagger(G)
    W = Gd @ s - s @ Gd
    return hermitian_part(W)


def seminorm_linf_batch(elements: np.ndarray, X: np.ndarray, want_grad: bool = True):
    """l-infinity commutator seminorm max_s ||[s, X]|| for a stack X (R, D, D)."""
    comms = np.einsum("mij,rjk->mrik", elements, X) - np.einsum("rij,mjk->mrik", X, elements)
    svals = np.linalg.svd(comms, compute_uv=False)[..., 0]  # (m, R)
    which = np.argmax(svals, axis=0)
    vals = svals[which, np.arange(X.shape[0])]
    if not want_grad:
        return vals, None
    best = comms[which, np.arange(X.shape[0])]
    _, G = _top_singular_grad(best)
    grads = np.stack(
        [_pullback_commutator(G[r], elements[which[r]]) for r in range(X.shape[0])]
    )
    return vals, grads


def seminorm_l2_batch(elements: np.ndarray, X: np.ndarray, want_grad: bool = True):
    """l2 commutator seminorm ||(sum_s [s,X]^dag [s,X])^(1/2)|| for a stack X."""
    comms = np.einsum("mij,rjk->mrik", elements, X) - np.einsum("rij,mjk->mrik", X, elements)
    T = np.einsum("mrji,mrjk->rik", comms.conj(), comms)
    w, V = np.linalg.eigh(T)
    lam = np.maximum(w[:, -1], 0.0)
    vals = np.sqrt(lam)
    if not want_grad:
        return vals, None
    u = V[:, :, -1]
    R = X.shape[0]
    grads = np.zeros_like(X)
    for r in range(R):
        if vals[r] <= 1e-300:
            continue
        uu = np.outer(u[r], u[r].conj())
        acc = np.zeros_like(X[r])
        for m in range(elements.shape[0]):
            Gm = comms[m, r] @ uu
            acc += 2.0 * _pullback_commutator(Gm, elements[m])
        grads[r] = acc / (2.0 * vals[r])
    return vals, grads


# ---------------------------------------------------------------------------
# ratio objectives in real coordinates


class RatioObjective:
    """N(X)/D(X) in real Hermitian-basis coordinates restricted to columns Q.

    ``numerator`` and ``denominator`` are callables mapping a stack of
    full-basis coordinates (R, D*D) to (values, gradient coords or None).
    """

    def __init__(self, basis: np.ndarray, Q: np.ndarray, numerator, denominator):
        self.basis = basis
        self.Q = Q
        self.numerator = numerator
        self.denominator = denominator

    def evaluate(self, Y: np.ndarray, want_grad: bool = True):
        C = Y @ self.Q.T  # (R, D*D)
        nv, ng = self.numerator(C, want_grad)
        dv, dg = self.denominator(C, want_grad)
        safe = np.maximum(dv, 1e-300)
        vals = nv / safe
        if not want_grad:
            return vals, None
        G = (ng * safe[:, None] - dg * nv[:, None]) / (safe**2)[:, None]
        return vals, G @ self.Q


def linear_numerator(f_coords: np.ndarray):
    """tr(f X) as a coordinate functional."""

    def term(C: np.ndarray, want_grad: bool):
        vals = C @ f_coords
        if not want_grad:
            return vals, None
        return vals, np.broadcast_to(f_coords, C.shape).copy()

    return term


def opnorm_of_map_term(map_coords: np.ndarray | None, basis: np.ndarray):
    """||A(X)||_op with A given as a real coordinate matrix (None = identity)."""

    def term(C: np.ndarray, want_grad: bool):
        Cm = C if map_coords is None else C @ map_coords.T
        M = from_coords(Cm, basis)
        vals, G = opnorm_hermitian_batch(M)
        if not want_grad:
            return vals, None
        g = to_coords(G, basis)
        if map_coords is not None:
            g = g @ map_coords
        return vals, g

    return term


def seminorm_term(elements: np.ndarray, kind: str, basis: np.ndarray, map_coords: np.ndarray | None = None):
    """|||A(X)||| as a coordinate functional (A = identity when map_coords is None)."""
    eval_fn = seminorm_linf_batch if kind == "linf" else seminorm_l2_batch

    def term(C: np.ndarray, want_grad: bool):
        Cm = C if map_coords is None else C @ map_coords.T
        X = from_coords(Cm, basis)
        vals, G = eval_fn(elements, X, want_grad)
        if not want_grad:
            return vals, None
        g = to_coords(G, basis)
        if map_coords is not None:
            g = g @ map_coords
        return vals, g

    return term


# ---------------------------------------------------------------------------
# the driver


def _normalize_rows(Y: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(Y, axis=1, keepdims=True)
    n[n == 0] = 1.0
    return Y / n


def maximize_ratio(
    objective: RatioObjective,
    seed: int,
    options: AscentOptions | None = None,
    extra_starts: list[np.ndarray] | None = None,
) -> AscentResult:
    """Multi-restart projected supergradient ascent on the coordinate sphere.

    ``extra_starts`` are full-basis coordinate vectors used as structured
    initial points (projected into the subspace); the rest of the restarts are
    random.  The stagnation gap follows the cheap-certificate rule: if at
    least min(50, restarts) restarts end within 1e-6 relative of the best, the
    gap is 1e-4, otherwise 1e-2.
    """
    opts = options or AscentOptions()
    rng = np.random.default_rng([0x5EED, seed & 0xFFFFFFFF])
    r = objective.Q.shape[1]
    if r == 0:
        raise ValueError("ascent subspace is empty")
    R = max(1, opts.restarts)
    Y = rng.standard_normal((R, r))
    row = 0
    for start in extra_starts or []:
        y = start @ objective.Q
        if np.linalg.norm(y) > 1e-12 and row < R:
            Y[row] = y
            row += 1
    Y = _normalize_rows(Y)

    best_vals = np.full(R, -np.inf)
    best_global = -np.inf
    best_y = Y[0].copy()
    for t in range(1, opts.iterations + 1):
        vals, G = objective.evaluate(Y, want_grad=True)
        improved = vals > best_vals
        best_vals = np.where(improved, vals, best_vals)
        k = int(np.argmax(vals))
        if vals[k] > best_global:
            best_global = float(vals[k])
            best_y = Y[k].copy()
        gn = np.linalg.norm(G, axis=1, keepdims=True)
        gn[gn == 0] = 1.0
        Y = _normalize_rows(Y + (opts.step / np.sqrt(t)) * G / gn)

    # derivative-free polish around the best point
    radius = 0.3
    y = best_y
    for _ in range(opts.polish_rounds):
        P = _normalize_rows(y + radius * rng.standard_normal((opts.polish_batch, r)))
        vals, _ = objective.evaluate(P, want_grad=False)
        k = int(np.argmax(vals))
        if vals[k] > best_global:
            best_global = float(vals[k])
            y = P[k].copy()
        else:
            radius *= 0.5
    best_y = y

    vals, _ = objective.evaluate(best_y[None, :], want_grad=False)
    best_global = float(vals[0])

    finite = best_vals[np.isfinite(best_vals)]
    spread = float(finite.max() - finite.min()) if finite.size else 0.0
    scale = max(abs(best_global), 1e-30)
    close = int(np.sum(finite >= best_global - 1e-6 * scale))
    gap = 1e-4 if close >= min(50, R) else 1e-2
    coords = best_y @ objective.Q.T
    return AscentResult(best_global, coords, best_vals, spread, gap)


def orthonormal_columns(M: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the column span of M."""
    if M.size == 0:
        return M.reshape(M.shape[0], 0)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0] if s.size else 1.0)))
    return U[:, :rank]


def complement_within(Q: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(Q) minus its intersection with span(C).

    Columns of Q are orthonormal; C holds (orthonormal) coordinates to quotient
    out.  The result stays inside span(Q).
    """
    if Q.shape[1] == 0 or C.shape[1] == 0:
        return Q
    Mre = Q - C @ (C.T @ Q)
    # nullspace of Mre (as a map on the y-coefficients) spans the intersection
    _, s, Vh = np.linalg.svd(Mre, full_matrices=False)
    keep = s > 1e-10 * max(1.0, s[0] if s.size else 1.0)
    W = Vh[keep].T  # y-directions with a component outside span(C)
    return orthonormal_columns(Q @ W)
