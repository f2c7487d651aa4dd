"""Commutator Lipschitz seminorms and their duals.

A finite resource set S of matrices induces the seminorms

    |||x|||_S      = max_{s in S} ||[s, x]||_op
    |||x|||_{S,2}  = || (sum_s [s,x]^dag [s,x])^(1/2) ||_op

and their amplifications with resource I_n (x) s.  Both vanish exactly on the
commutant of S, which is the fixed-point algebra of the associated
conditional expectation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .ascent import (
    AscentOptions,
    AscentResult,
    RatioObjective,
    complement_within,
    linear_numerator,
    maximize_ratio,
    orthonormal_columns,
    seminorm_l2_batch,
    seminorm_linf_batch,
    seminorm_term,
)
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    as_complex_matrix,
    from_coords,
    hermitian_basis,
    matrix_from_json,
    matrix_to_json,
    require_hermitian,
    to_coords,
)
from .report import METHOD_ASCENT_LOWER, METHOD_CLOSED_FORM, CostReport

KIND_LINF = "linf"
KIND_L2 = "l2"


@dataclass
class ResourceSet:
    """Finite list of matrices defining a commutator seminorm."""

    dim: int
    elements: list[np.ndarray]
    labels: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("resource set must be nonempty")
        self.elements = [as_complex_matrix(e) for e in self.elements]
        for e in self.elements:
            if e.shape != (self.dim, self.dim):
                raise ValueError(f"resource element of shape {e.shape}, expected ({self.dim},{self.dim})")
        if not self.labels:
            self.labels = [f"s{i}" for i in range(len(self.elements))]
        if len(self.labels) != len(self.elements):
            raise ValueError("labels must match elements")

    def __len__(self) -> int:
        return len(self.elements)

    def max_op_norm(self) -> float:
        return max(linalg.op_norm(e) for e in self.elements)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "elements": [matrix_to_json(e) for e in self.elements],
            "labels": list(self.labels),
        }


def resource_from_json(obj: dict) -> ResourceSet:
    return ResourceSet(
        dim=int(obj["dim"]),
        elements=[matrix_from_json(m) for m in obj["elements"]],
        labels=list(obj.get("labels", [])),
    )


def pauli_resource() -> ResourceSet:
    return ResourceSet(2, [PAULI_X, PAULI_Y, PAULI_Z], ["sx", "sy", "sz"])


def pauli_xy_resource() -> ResourceSet:
    return ResourceSet(2, [PAULI_X, PAULI_Y], ["sx", "sy"])


def su2_resource() -> ResourceSet:
    """Skew-adjoint orthonormal frame {i sx, i sy, i sz} of su(2)."""
    return ResourceSet(2, [1j * PAULI_X, 1j * PAULI_Y, 1j * PAULI_Z], ["isx", "isy", "isz"])


def gell_mann_resource(d: int) -> ResourceSet:
    """The d*d-1 traceless orthogonal Hermitian generators, Pauli-normalized."""
    basis = hermitian_basis(d)[1:]
    return ResourceSet(d, [np.sqrt(2.0) * b for b in basis], [f"g{i}" for i in range(len(basis))])


def resource_from_spec(text: str) -> ResourceSet:
    """Parse the CLI resource grammar: pauli | pauli-xy | su2 | gellmann:d | single:file | path."""
    if text == "pauli":
        return pauli_resource()
    if text == "pauli-xy":
        return pauli_xy_resource()
    if text == "su2":
        return su2_resource()
    if text.startswith("gellmann:"):
        return gell_mann_resource(int(text.split(":", 1)[1]))
    if text.startswith("single:"):
        path = text.split(":", 1)[1]
        with open(path) as fh:
            M = matrix_from_json(json.load(fh))
        return ResourceSet(M.shape[0], [M], ["s0"])
    with open(text) as fh:
        return resource_from_json(json.load(fh))


@dataclass
class SeminormSpec:
    """A resource set, the seminorm flavor, and a finite amplification level."""

    resource: ResourceSet
    kind: str = KIND_LINF
    amplification: int = 1

    def __post_init__(self) -> None:
        if self.kind not in (KIND_LINF, KIND_L2):
            raise ValueError(f"kind must be '{KIND_LINF}' or '{KIND_L2}'")
        if self.amplification < 1:
            raise ValueError("amplification must be >= 1")

    @property
    def ambient_dim(self) -> int:
        return self.amplification * self.resource.dim

    def amplified_elements(self) -> np.ndarray:
        n = self.amplification
        if n == 1:
            return np.stack(self.resource.elements)
        eye = np.eye(n, dtype=complex)
        return np.stack([np.kron(eye, s) for s in self.resource.elements])


def seminorm(spec: SeminormSpec, X) -> float:
    """Evaluate the commutator seminorm of a single matrix."""
    M = as_complex_matrix(X)
    D = spec.ambient_dim
    if M.shape != (D, D):
        raise ValueError(f"matrix of shape {M.shape} does not match spec ambient dim {D}")
    elements = spec.amplified_elements()
    fn = seminorm_linf_batch if spec.kind == KIND_LINF else seminorm_l2_batch
    vals, _ = fn(elements, M[None, :, :], want_grad=False)
    return float(vals[0])


def seminorm_batch(spec: SeminormSpec, X: np.ndarray) -> np.ndarray:
    """Vectorized seminorm over a stack (R, D, D)."""
    elements = spec.amplified_elements()
    fn = seminorm_linf_batch if spec.kind == KIND_LINF else seminorm_l2_batch
    vals, _ = fn(elements, X, want_grad=False)
    return vals


def joint_resource(s1: ResourceSet, s2: ResourceSet) -> ResourceSet:
    """Composite resource S1 v S2 = (S1 (x) 1) U (1 (x) S2)."""
    d1, d2 = s1.dim, s2.dim
    eye1, eye2 = np.eye(d1, dtype=complex), np.eye(d2, dtype=complex)
    elements = [np.kron(e, eye2) for e in s1.elements] + [np.kron(eye1, e) for e in s2.elements]
    labels = [f"{l}(x)1" for l in s1.labels] + [f"1(x){l}" for l in s2.labels]
    return ResourceSet(d1 * d2, elements, labels)


# ---------------------------------------------------------------------------
# commutant of the (amplified) resource set


def commutant(resource: ResourceSet | SeminormSpec) -> list[np.ndarray]:
    """Hilbert-Schmidt-orthonormal Hermitian basis of {X : [s, X] = 0 for all s}.

    Computed as the joint nullspace of the stacked commutator superoperator;
    always contains I/sqrt(dim) as its first element.
    """
    spec = resource if isinstance(resource, SeminormSpec) else SeminormSpec(resource)
    elements = spec.amplified_elements()
    D = spec.ambient_dim
    eye = np.eye(D, dtype=complex)
    A = np.zeros((D * D, D * D), dtype=complex)
    for s in elements:
        L = np.kron(s, eye) - np.kron(eye, s.T)
        A += L.conj().T @ L
    w, V = np.linalg.eigh(linalg.hermitian_part(A))
    sv = np.sqrt(np.clip(w, 0.0, None))
    thr = 1e-9 * max(float(sv[-1]), 1e-30)
    null = V[:, sv <= thr]

    basis = hermitian_basis(D)
    candidates = [eye / math.sqrt(D)]
    for k in range(null.shape[1]):
        M = null[:, k].reshape(D, D)
        candidates.append(linalg.hermitian_part(M))
        candidates.append(linalg.hermitian_part(1j * M))
    coords = np.stack([to_coords(c, basis) for c in candidates])  # (n, D*D)
    Q = orthonormal_columns(coords.T)
    out = [from_coords(Q[:, j], basis) for j in range(Q.shape[1])]
    # put the normalized identity first
    eye_c = to_coords(eye / math.sqrt(D), basis)
    if abs(float(Q[:, 0] @ eye_c)) < 1 - 1e-9:
        coords2 = np.concatenate([eye_c[:, None], Q], axis=1)
        Q = orthonormal_columns(coords2)
        out = [from_coords(Q[:, j], basis) for j in range(Q.shape[1])]
    scale = max(float(np.max(np.abs(elements))), 1.0)
    for B in out:
        worst = max(float(np.max(np.abs(s @ B - B @ s))) for s in elements)
        if worst > 1e-8 * scale:
            raise ValueError(
                "commutant candidate fails to commute; resource set is not closed under adjoints"
            )
    return out


# ---------------------------------------------------------------------------
# context shared by the ascent-based estimators


@dataclass
class SeminormContext:
    spec: SeminormSpec
    basis: np.ndarray  # (D*D, D, D)
    elements: np.ndarray  # amplified resource elements
    commutant_coords: np.ndarray  # (D*D, n_c), orthonormal columns
    Q: np.ndarray  # free directions, orthonormal columns (D*D, r)

    @property
    def dim(self) -> int:
        return self.spec.ambient_dim

    def denominator(self):
        return seminorm_term(self.elements, self.spec.kind, self.basis)

    def seminorm_of(self, X: np.ndarray) -> float:
        fn = seminorm_linf_batch if self.spec.kind == KIND_LINF else seminorm_l2_batch
        vals, _ = fn(self.elements, X[None], want_grad=False)
        return float(vals[0])

    def restrict(self, subspace: list[np.ndarray]) -> "SeminormContext":
        """Context whose free directions live inside the span of ``subspace``."""
        coords = np.stack([to_coords(require_hermitian(S, 1e-9), self.basis) for S in subspace])
        QV = orthonormal_columns(coords.T)
        Qeff = complement_within(QV, self.commutant_coords)
        return SeminormContext(self.spec, self.basis, self.elements, self.commutant_coords, Qeff)


def build_context(spec: SeminormSpec) -> SeminormContext:
    D = spec.ambient_dim
    basis = hermitian_basis(D)
    elements = spec.amplified_elements()
    comm = commutant(spec)
    Ccoords = np.stack([to_coords(B, basis) for B in comm]).T  # (D*D, n_c)
    Ccoords = orthonormal_columns(Ccoords)
    full = np.eye(D * D)
    Q = complement_within(full, Ccoords)
    return SeminormContext(spec, basis, elements, Ccoords, Q)


# ---------------------------------------------------------------------------
# exact qubit Pauli oracle: support function of the seminorm unit ball


def pauli_ball_support(u: np.ndarray) -> tuple[float, np.ndarray]:
    """max{u . v : 2 max pairwise sqrt(vi^2+vj^2) <= 1} with an optimal v.

    The feasible set is the intersection of three cylinders of radius 1/2.
    Candidates: the symmetric corner |v1|=|v2|=|v3| = 1/(2 sqrt 2), and for
    each axis k the two-cylinder arc giving sqrt(A^2+B^2)/2 with A = |u_k|,
    B = sum of the other two |u_j| whenever B <= A.
    """
    u = np.asarray(u, dtype=float)
    a = np.abs(u)
    sgn = np.where(u >= 0, 1.0, -1.0)
    best = float(np.sum(a)) / (2 * math.sqrt(2))
    vbest = sgn / (2 * math.sqrt(2))
    for k in range(3):
        A = a[k]
        B = a[(k + 1) % 3] + a[(k + 2) % 3]
        if B <= A and A > 0:
            val = 0.5 * math.hypot(A, B)
            if val > best:
                t = 0.5 * B / math.hypot(A, B)
                vk = 0.5 * A / math.hypot(A, B)
                v = np.zeros(3)
                v[k] = sgn[k] * vk
                v[(k + 1) % 3] = sgn[(k + 1) % 3] * t
                v[(k + 2) % 3] = sgn[(k + 2) % 3] * t
                best, vbest = val, v
    return best, vbest


def is_pauli_spec(spec: SeminormSpec) -> bool:
    if spec.amplification != 1 or spec.kind != KIND_LINF or spec.resource.dim != 2:
        return False
    if len(spec.resource.elements) != 3:
        return False
    return all(
        np.allclose(e, p, atol=1e-12) for e, p in zip(spec.resource.elements, (PAULI_X, PAULI_Y, PAULI_Z))
    )


def pauli_dual_value(spec_or_none, f: np.ndarray) -> tuple[float, np.ndarray]:
    """Exact dual value sup{tr(f X) : |||X|||_Pauli <= 1} for traceless qubit f."""
    _, u1, u2, u3 = linalg.pauli_decompose(f)
    u = np.array([u1, u2, u3])
    if np.linalg.norm(u) < 1e-15:
        return 0.0, np.zeros((2, 2), dtype=complex)
    val, v = pauli_ball_support(u)
    X = linalg.pauli_compose(0.0, *v)
    return 2.0 * val, X


# ---------------------------------------------------------------------------
# dual seminorm evaluation (certificate)


def dual_seminorm(
    spec: SeminormSpec,
    f,
    options: AscentOptions | None = None,
    seed: int = 0,
    context: SeminormContext | None = None,
) -> CostReport:
    """Lower/upper certificate for sup{|tr(f X)| : |||X|||_spec <= 1}.

    ``f`` must be Hermitian and traceless (functionals on the quotient by the
    unit).  If f pairs nontrivially with the commutant the supremum is
    infinite and the report says so.
    """
    F = require_hermitian(f, 1e-9)
    if abs(float(np.trace(F).real)) > 1e-10 * max(1.0, float(np.max(np.abs(F)))):
        raise ValueError("dual seminorm requires a traceless functional")
    D = spec.ambient_dim
    if F.shape != (D, D):
        raise ValueError(f"functional of shape {F.shape} does not match ambient dim {D}")

    if is_pauli_spec(spec):
        val, X = pauli_dual_value(spec, F)
        return CostReport(val, val, X, [METHOD_CLOSED_FORM], seed)

    ctx = context or build_context(spec)
    fc = to_coords(F, ctx.basis)
    overlap = ctx.commutant_coords.T @ fc
    fnorm = max(float(np.linalg.norm(fc)), 1e-30)
    if float(np.linalg.norm(overlap)) > 1e-10 * fnorm:
        k = int(np.argmax(np.abs(overlap)))
        bad = from_coords(ctx.commutant_coords[:, k], ctx.basis)
        return CostReport(math.inf, math.inf, bad, ["commutant-overlap"], seed)
    if fnorm < 1e-29:
        return CostReport(0.0, 0.0, np.zeros((D, D), dtype=complex), ["exact"], seed)

    opts = options or AscentOptions(restarts=200, iterations=500)
    obj = RatioObjective(ctx.basis, ctx.Q, linear_numerator(fc), ctx.denominator())
    res = maximize_ratio(obj, seed, opts, extra_starts=[fc])
    X = from_coords(res.witness_coords, ctx.basis)
    sn = ctx.seminorm_of(X)
    X = X / sn
    lower = float(np.trace(F @ X).real)
    upper = lower * (1.0 + res.stagnation_gap)
    return CostReport(lower, upper, X, [METHOD_ASCENT_LOWER, f"gap={res.stagnation_gap:g}"], seed)


def group_seminorm(group, f) -> float:
    """Exact commutative seminorm max_{s,g} |f(sg) - f(g)| on a finite group.

    ``group`` provides ``order``, ``table`` and ``generators`` (see the groups
    module); ``f`` is a real vector indexed by group elements.
    """
    vals = np.asarray(f, dtype=float)
    if vals.shape != (group.order,):
        raise ValueError("function must assign one real value per group element")
    best = 0.0
    for s in group.generators:
        shifted = vals[group.table[s]]
        best = max(best, float(np.max(np.abs(shifted - vals))))
    return best
