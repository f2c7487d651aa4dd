"""SU(2) bi-invariant geodesic distance and the conjugation-cost bound.

With the orthonormal frame {i sx, i sy, i sz} of su(2), the minimal-length
logarithm of g = exp(i theta n.sigma) has norm theta, so the bi-invariant
distance to the identity is arccos(Re tr(g)/2).  The transportation cost of
conjugation by g, measured in the l2-type commutator seminorm of the frame,
never exceeds that distance.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg
from .ascent import AscentOptions
from .channel import unitary_channel
from .seminorm import KIND_L2, SeminormContext, SeminormSpec, build_context, seminorm, su2_resource
from .transport import cost


def require_su2(g) -> np.ndarray:
    M = linalg.as_complex_matrix(g)
    if M.shape != (2, 2):
        raise ValueError("SU(2) element must be a 2x2 matrix")
    if np.max(np.abs(linalg.dagger(M) @ M - np.eye(2))) > 1e-10:
        raise ValueError("matrix is not unitary within 1e-10")
    det = np.linalg.det(M)
    if abs(det - 1.0) > 1e-10:
        raise ValueError(f"determinant {det} is not 1 within 1e-10")
    return M


def random_su2(rng: np.random.Generator) -> np.ndarray:
    U = linalg.random_unitary(rng, 2)
    det = np.linalg.det(U)
    return U / np.sqrt(det)


def cc_distance_su2(g) -> float:
    """Bi-invariant distance to the identity: theta with g = exp(i theta n.sigma)."""
    M = require_su2(g)
    c = float(np.clip(np.trace(M).real / 2.0, -1.0, 1.0))
    return math.acos(c)


def su2_l2_spec() -> SeminormSpec:
    return SeminormSpec(su2_resource(), kind=KIND_L2)


def rep_lipschitz_seminorm(X) -> float:
    """l2 commutator seminorm of X for the orthonormal su(2) frame."""
    return seminorm(su2_l2_spec(), X)


def verify_cc_bound(
    g,
    options: AscentOptions | None = None,
    seed: int = 0,
    context: SeminormContext | None = None,
    tol: float = 1e-6,
) -> dict:
    """Estimate the conjugation cost of g and compare against the distance bound."""
    M = require_su2(g)
    spec = su2_l2_spec()
    ctx = context or build_context(spec)
    dist = cc_distance_su2(M)
    opts = options or AscentOptions(restarts=24, iterations=150)
    rep = cost(unitary_channel(M), spec, options=opts, seed=seed, context=ctx)
    return {
        "distance": dist,
        "cost_lower": rep.lower,
        "margin": dist - rep.lower,
        "ok": rep.lower <= dist + tol,
    }
