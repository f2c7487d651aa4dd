"""Finite-group model: Cayley word lengths and the commutative cost identity.

Groups are explicit multiplication tables with a symmetric generating set.
Word lengths come from breadth-first search, means are exact rationals, and
``embed_commutative`` realizes the function algebra inside the full matrix
algebra so the quantum estimators can be cross-checked against the exact
combinatorics.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np

from .channel import QuantumChannel, replacer_channel
from .seminorm import ResourceSet

__all__ = [
    "FiniteGroupTable",
    "WordLengthProfile",
    "CommutativeEmbedding",
    "cyclic_group",
    "dihedral_group",
    "symmetric_group",
    "group_from_json",
    "group_from_spec",
    "word_lengths",
    "group_cost_efix",
    "translation_cost",
    "embed_commutative",
]


@dataclass
class FiniteGroupTable:
    """Multiplication table (table[a][b] = a*b) with a symmetric generating set."""

    order: int
    table: np.ndarray
    identity: int
    generators: list[int]
    name: str = "group"
    _inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        T = np.asarray(self.table, dtype=np.int64)
        if T.shape != (self.order, self.order):
            raise ValueError(f"table shape {T.shape} does not match order {self.order}")
        if T.min() < 0 or T.max() >= self.order:
            raise ValueError("table entries must be valid element indices")
        self.table = T
        ids = np.arange(self.order)
        for axis, rowcol in ((1, T), (0, T.T)):
            if not all(np.array_equal(np.sort(line), ids) for line in rowcol):
                raise ValueError("table is not a Latin square")
        if not (np.array_equal(T[self.identity], ids) and np.array_equal(T[:, self.identity], ids)):
            raise ValueError("identity index does not act as identity")
        self._inverse = np.empty(self.order, dtype=np.int64)
        for a in range(self.order):
            hits = np.where(T[a] == self.identity)[0]
            if len(hits) != 1:
                raise ValueError("element without a unique inverse")
            self._inverse[a] = hits[0]
        self._check_associativity()
        gens = sorted(set(int(g) for g in self.generators))
        if not gens:
            raise ValueError("generating set must be nonempty")
        for s in gens:
            if int(self._inverse[s]) not in gens:
                raise ValueError(f"generating set is not symmetric: inverse of {s} missing")
        self.generators = gens
        if -1 in _bfs_lengths(self):
            raise ValueError("generators do not generate the group (unreachable elements)")

    def _check_associativity(self) -> None:
        T = self.table
        n = self.order
        if n <= 24:
            left = T[T, :]
            right = T[:, T]
            if not np.array_equal(left, np.transpose(right, (1, 2, 0))):
                # spell the failing triple out for the error message
                for a in range(n):
                    for b in range(n):
                        for c in range(n):
                            if T[T[a, b], c] != T[a, T[b, c]]:
                                raise ValueError(f"table is not associative at ({a},{b},{c})")
            return
        rng = np.random.default_rng(0)
        for _ in range(1000):
            a, b, c = rng.integers(0, n, size=3)
            if T[T[a, b], c] != T[a, T[b, c]]:
                raise ValueError(f"table is not associative at ({a},{b},{c})")

    def inverse(self, a: int) -> int:
        return int(self._inverse[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "table": self.table.tolist(),
            "identity": self.identity,
            "generators": list(self.generators),
        }


def group_from_json(obj: dict) -> FiniteGroupTable:
    return FiniteGroupTable(
        order=int(obj["order"]),
        table=np.asarray(obj["table"], dtype=np.int64),
        identity=int(obj["identity"]),
        generators=[int(g) for g in obj["generators"]],
        name=str(obj.get("name", "group")),
    )


def cyclic_group(n: int) -> FiniteGroupTable:
    """Z_n with generators {1, n-1}."""
    if n < 1:
        raise ValueError("order must be positive")
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    gens = [1 % n] if n <= 2 else [1, n - 1]
    if n == 1:
        gens = [0]
    return FiniteGroupTable(n, table, 0, gens, name=f"Z{n}")


def dihedral_group(n: int) -> FiniteGroupTable:
    """D_n of order 2n: elements r^i and r^i f, generators {r, r^-1, f}."""
    if n < 2:
        raise ValueError("dihedral group needs n >= 2")
    order = 2 * n

    def mul(a: int, b: int) -> int:
        ia, fa = a % n, a // n
        ib, fb = b % n, b // n
        # (r^ia f^fa)(r^ib f^fb): f r^k = r^{-k} f
        i = (ia + (n - ib if fa else ib)) % n
        return i + n * ((fa + fb) % 2)

    table = np.array([[mul(a, b) for b in range(order)] for a in range(order)])
    gens = [1, n - 1, n] if n > 2 else [1, n]
    return FiniteGroupTable(order, table, 0, gens, name=f"D{n}")


def symmetric_group(n: int) -> FiniteGroupTable:
    """S_n (n <= 5 at desk scale) with adjacent transpositions as generators."""
    if n < 1 or n > 5:
        raise ValueError("symmetric_group supports 1 <= n <= 5")
    elems = sorted(permutations(range(n)))
    idx = {p: i for i, p in enumerate(elems)}
    order = len(elems)

    def compose(p, q):  # (p q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(n))

    table = np.array([[idx[compose(p, q)] for q in elems] for p in elems])
    gens = []
    for k in range(n - 1):
        t = list(range(n))
        t[k], t[k + 1] = t[k + 1], t[k]
        gens.append(idx[tuple(t)])
    if not gens:
        gens = [idx[tuple(range(n))]]
    return FiniteGroupTable(order, table, idx[tuple(range(n))], gens, name=f"S{n}")


def group_from_spec(text: str) -> FiniteGroupTable:
    """Parse "zn:8", "dihedral:4", "s3", "s4", or a path to group JSON."""
    if text.startswith("zn:"):
        return cyclic_group(int(text.split(":", 1)[1]))
    if text.startswith("dihedral:"):
        return dihedral_group(int(text.split(":", 1)[1]))
    if text in ("s1", "s2", "s3", "s4", "s5"):
        return symmetric_group(int(text[1]))
    with open(text) as fh:
        return group_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# word lengths


def _bfs_lengths(group: FiniteGroupTable, source: int | None = None, right: bool = False) -> np.ndarray:
    """BFS distances from ``source`` over generator edges (left mult by default)."""
    n = group.order
    src = group.identity if source is None else source
    dist = np.full(n, -1, dtype=np.int64)
    dist[src] = 0
    q = deque([src])
    T = group.table
    while q:
        g = q.popleft()
        for s in group.generators:
            h = int(T[g, s]) if right else int(T[s, g])
            if dist[h] < 0:
                dist[h] = dist[g] + 1
                q.append(h)
    return dist


@dataclass
class WordLengthProfile:
    lengths: np.ndarray  # exact integers
    mean: Fraction

    def to_json(self) -> dict:
        return {"lengths": self.lengths.tolist(), "mean": f"{self.mean.numerator}/{self.mean.denominator}"}


def word_lengths(group: FiniteGroupTable) -> WordLengthProfile:
    """Exact Cayley word lengths by BFS from the identity; mean as a rational."""
    dist = _bfs_lengths(group)
    if np.any(dist < 0):
        missing = np.where(dist < 0)[0].tolist()
        raise ValueError(f"generators do not reach elements {missing}")
    mean = Fraction(int(dist.sum()), group.order)
    return WordLengthProfile(dist, mean)


def group_cost_efix(group: FiniteGroupTable) -> tuple[Fraction, dict]:
    """Exact transportation cost of averaging = mean word length, with witness checks.

    The witness is f = lengths - mean; the cross-check confirms its seminorm
    is at most 1 and its sup norm is at least the mean (all in exact
    arithmetic).
    """
    from .seminorm import group_seminorm

    prof = word_lengths(group)
    f = prof.lengths - float(prof.mean)
    sn = group_seminorm(group, f)
    sup = max(abs(Fraction(int(l)) - prof.mean) for l in prof.lengths)
    checks = {
        "witness_seminorm": sn,
        "witness_seminorm_ok": sn <= 1 + 1e-12,
        "witness_sup_ge_mean": sup >= prof.mean,
        "closed_form_mean": prof.mean,
    }
    return prof.mean, checks


def translation_cost(group: FiniteGroupTable, g: int) -> int:
    """Cost of right translation by g: the word length of g.

    Cross-checked against the left-invariant Cayley distance: for every h the
    BFS distance from h to h*g (edges = right multiplication by generators)
    equals the word length of g.
    """
    if not 0 <= g < group.order:
        raise ValueError(f"element index {g} out of range")
    ell = int(word_lengths(group).lengths[g])
    worst = 0
    for h in range(group.order):
        dist = _bfs_lengths(group, source=h, right=True)
        worst = max(worst, int(dist[group.mul(h, g)]))
    if worst != ell:
        raise AssertionError(f"left-invariance cross-check failed: {worst} != {ell}")
    return ell


# ---------------------------------------------------------------------------
# embedding into the matrix algebra


@dataclass
class CommutativeEmbedding:
    """Function algebra of a finite group embedded diagonally in M_{|G|}."""

    group: FiniteGroupTable
    resource: ResourceSet  # left-regular permutation matrices of the generators
    efix: QuantumChannel  # averaging channel (replacer to the normalized trace)
    diagonal_basis: list[np.ndarray]  # Hermitian units spanning the embedded algebra

    def embed_function(self, f) -> np.ndarray:
        vals = np.asarray(f, dtype=float)
        if vals.shape != (self.group.order,):
            raise ValueError("function must assign one real value per group element")
        return np.diag(vals).astype(complex)


def embed_commutative(group: FiniteGroupTable, max_order: int = 12) -> CommutativeEmbedding:
    """Left-regular embedding: resource {lambda_s}, averaging channel, diagonal algebra.

    The seminorm of the diagonal embedding of f equals the combinatorial
    seminorm exactly; applying the quantum cost estimator to the averaging
    channel restricted to the diagonal algebra reproduces the mean word
    length.
    """
    n = group.order
    if n > max_order:
        raise ValueError(f"group order {n} exceeds embedding cap {max_order}")
    lam = []
    for s in group.generators:
        P = np.zeros((n, n), dtype=complex)
        for g in range(n):
            P[group.mul(s, g), g] = 1.0
        lam.append(P)
    resource = ResourceSet(n, lam, [f"lam{s}" for s in group.generators])
    efix = replacer_channel(np.eye(n, dtype=complex) / n)
    diag = []
    for g in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[g, g] = 1.0
        diag.append(E)
    return CommutativeEmbedding(group, resource, efix, diag)
