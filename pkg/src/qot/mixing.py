"""Mixing-time family: trace-norm mixing, Choi-order return time, cost-induced mixing.

Channel iterates are taken as superoperator powers (no Kraus blow-up).  The
cost-induced quantities use matched estimators: the expected-length witness
and seed are shared with the per-step cost evaluations so crossings of the
ratio are not estimator artifacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .ascent import AscentOptions
from .channel import ConditionalExpectation, MatrixMap, QuantumChannel, choi, is_cp_order
from .contraction import lip
from .report import CostReport
from .seminorm import SeminormContext, SeminormSpec, build_context
from .transport import MapLike, cost, cost_iterates, expected_length


class CapExceededError(RuntimeError):
    """Raised when an iteration cap is hit before the defining event occurs."""

    def __init__(self, message: str, distances: list[float] | None = None):
        super().__init__(message)
        self.distances = distances or []


@dataclass
class MixingReport:
    epsilon: float
    t_mix: int | None
    capped: bool
    distances: list[float] = field(default_factory=list)
    method: str = "sample-max"

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "t_mix": self.t_mix,
            "capped": self.capped,
            "distances": list(self.distances),
            "method": self.method,
        }


def trace_mixing_time(
    channel: MapLike,
    eps: float,
    cap: int = 10_000,
    n_states: int = 64,
    seed: int = 0,
) -> MixingReport:
    """First n with ||Phi^n(rho) - I/d||_1 <= eps for all states (sampled sup).

    Requires the maximally mixed state to be fixed.  The per-step worst case
    is estimated over sampled pure states plus a local hill climb at step 1;
    for unital channels the trajectory is non-increasing.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    d = channel.dim
    eye = np.eye(d, dtype=complex) / d
    if np.max(np.abs(channel.schrodinger(eye) - eye)) > 1e-9:
        raise ValueError("channel does not fix the maximally mixed state")

    rng = np.random.default_rng([0x317, seed & 0xFFFFFFFF])
    vecs = rng.standard_normal((n_states, d)) + 1j * rng.standard_normal((n_states, d))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    states = np.einsum("ri,rj->rij", vecs, vecs.conj())

    # refine the worst single-step state before iterating
    S = channel.schro_superop()

    def one_step_dist(rho: np.ndarray) -> float:
        img = (S @ rho.reshape(-1)).reshape(d, d)
        return linalg.trace_norm(img - eye)

    best_k = int(np.argmax([one_step_dist(states[k]) for k in range(n_states)]))
    v = vecs[best_k].copy()
    radius, best = 0.3, one_step_dist(states[best_k])
    for _ in range(40):
        w = v + radius * (rng.standard_normal(d) + 1j * rng.standard_normal(d))
        w /= np.linalg.norm(w)
        val = one_step_dist(np.outer(w, w.conj()))
        if val > best:
            best, v = val, w
        else:
            radius *= 0.8
    states[best_k] = np.outer(v, v.conj())

    flat = states.reshape(n_states, -1)
    distances: list[float] = []
    t_mix: int | None = None
    for n in range(1, cap + 1):
        flat = flat @ S.T
        mats = flat.reshape(n_states, d, d)
        diffs = (mats + linalg.dagger(mats)) / 2 - eye
        w = np.linalg.eigvalsh(diffs)
        dist = float(np.max(np.sum(np.abs(w), axis=1)))
        distances.append(dist)
        if dist <= eps:
            t_mix = n
            break
    return MixingReport(eps, t_mix, t_mix is None, distances)


def return_time(
    channel: MapLike,
    efix: ConditionalExpectation | MapLike,
    eps: float,
    cap: int = 500,
) -> int:
    """First n with (1-eps) E <=cp Phi^n <=cp (1+eps) E in the Choi order."""
    if not 0.0 < eps < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    d = channel.dim
    CE = choi(efix)
    for B in getattr(efix, "basis_fix", []):
        if np.max(np.abs(channel.heisenberg(B) - B)) > 1e-8:
            raise ValueError("channel does not fix the conditional expectation's range")
    S = channel.schro_superop()
    power = np.eye(d * d, dtype=complex)
    for n in range(1, cap + 1):
        power = power @ S
        Cn = choi(MatrixMap(d, power))
        if is_cp_order((1 - eps) * CE, Cn) and is_cp_order(Cn, (1 + eps) * CE):
            return n
    raise CapExceededError(f"return time exceeded cap {cap}")


def cost_mixing_time(
    channel: MapLike,
    spec: SeminormSpec,
    eps: float,
    cap: int = 200,
    options: AscentOptions | None = None,
    seed: int = 0,
    context: SeminormContext | None = None,
    kappa_report: CostReport | None = None,
) -> int:
    """First n with Cost(Phi^n) >= (1 - eps) kappa, using matched estimators."""
    if not 0.0 < eps < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    ctx = context or build_context(spec)
    kappa = kappa_report or expected_length(
        spec.resource, spec.kind, spec.amplification, options=options, seed=seed, context=ctx
    )
    if not math.isfinite(kappa.lower) or kappa.lower <= 0:
        raise ValueError("expected length estimate is degenerate")
    target = (1 - eps) * kappa.lower
    chunk = 16
    start = 0
    while start < cap:
        steps = min(chunk, cap - start)
        traj = cost_iterates(channel, spec, start + steps, kappa, options=options, seed=seed, context=ctx)
        for n in range(start, start + steps):
            if traj[n] >= target:
                return n + 1
        start += steps
        chunk *= 2
    raise CapExceededError(f"cost-induced mixing time exceeded cap {cap}")


def lip_cost_bridge_check(
    channel: MapLike,
    spec: SeminormSpec,
    options: AscentOptions | None = None,
    seed: int = 0,
    slack: float = 0.02,
    context: SeminormContext | None = None,
) -> dict:
    """Check Cost(Phi) >= (1 - Lip(Phi)) kappa with matched estimators.

    Requires the channel to commute with the conditional expectation onto the
    commutant (Phi o E = E o Phi = E within 1e-9 on the commutant basis).
    """
    ctx = context or build_context(spec)
    from .channel import conditional_expectation

    efix = conditional_expectation(spec.resource)
    worst = 0.0
    for B in efix.basis_fix:
        worst = max(worst, float(np.max(np.abs(channel.heisenberg(B) - B))))
        img = efix.apply(channel.schrodinger(B))
        worst = max(worst, float(np.max(np.abs(img - efix.apply(B)))))
    if worst > 1e-9:
        raise ValueError(f"channel does not commute with the conditional expectation (defect {worst:.2e})")

    kappa = expected_length(spec.resource, spec.kind, spec.amplification, options=options, seed=seed, context=ctx)
    pool = [kappa.witness] if kappa.witness is not None else None
    cost_rep = cost(channel, spec, options=options, seed=seed, extra_witnesses=pool, context=ctx)
    lip_rep = lip(channel, spec, options=options, seed=seed, context=ctx)
    lhs = cost_rep.lower
    rhs = (1.0 - lip_rep.lower) * kappa.lower
    return {
        "cost_lower": lhs,
        "lip_lower": lip_rep.lower,
        "kappa_lower": kappa.lower,
        "rhs": rhs,
        "ok": lhs >= rhs - slack * max(rhs, 1e-12),
        "equality_gap": abs(lhs - rhs),
        "seed": seed,
    }
