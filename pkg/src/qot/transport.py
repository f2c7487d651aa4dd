"""Transportation cost of channels, expected length, and the Wasserstein metric.

All supremum-type quantities come back as :class:`~qot.report.CostReport`
certificates: an ascent lower bound realized by a stored witness, plus a
rigorous upper bound assembled from the universal estimates (or +inf when the
channel fails to fix the commutant, in which case the cost genuinely blows
up).
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg
from .ascent import AscentOptions, RatioObjective, maximize_ratio, opnorm_of_map_term
from .channel import ConditionalExpectation, MatrixMap, QuantumChannel, conditional_expectation
from .linalg import from_coords, op_norm, require_density, require_hermitian, to_coords
from .report import (
    METHOD_ASCENT_LOWER,
    METHOD_SAMPLE_MAX,
    METHOD_THEORY_UPPER,
    CostReport,
)
from .seminorm import (
    KIND_LINF,
    ResourceSet,
    SeminormContext,
    SeminormSpec,
    build_context,
    dual_seminorm,
    is_pauli_spec,
    pauli_dual_value,
)

MapLike = QuantumChannel | ConditionalExpectation | MatrixMap


def amplify_map(map_like: MapLike, n: int) -> MatrixMap:
    """id_{M_n} (x) T as a superoperator, for any linear map T."""
    S = map_like.schro_superop()
    d = int(round(math.sqrt(S.shape[0])))
    if n == 1:
        return MatrixMap(d, S)
    K = np.kron(np.eye(n * n, dtype=complex), S)
    K = K.reshape(n, n, d, d, n, n, d, d).transpose(0, 2, 1, 3, 4, 6, 5, 7)
    big = n * d
    return MatrixMap(big, K.reshape(big * big, big * big))


def _ambient_map(map_like: MapLike, spec: SeminormSpec) -> MapLike:
    d = map_like.dim
    if d == spec.ambient_dim:
        return map_like
    if d == spec.resource.dim and spec.amplification > 1:
        return amplify_map(map_like, spec.amplification)
    raise ValueError(f"map dimension {d} matches neither resource dim nor ambient dim")


def heis_coords(map_like: MapLike, basis: np.ndarray) -> np.ndarray:
    """Real coordinate matrix of the Heisenberg action in a Hermitian basis."""
    S = map_like.schro_superop()
    Bv = basis.reshape(basis.shape[0], -1)  # rows = vec of basis elements
    return np.real(Bv.conj() @ S.conj().T @ Bv.T)


def _require_heis_unital(map_like: MapLike, tol: float = 1e-8) -> None:
    d = map_like.dim
    eye = np.eye(d, dtype=complex)
    if np.max(np.abs(map_like.heisenberg(eye) - eye)) > tol:
        raise ValueError(
            "cost/lip require a unital Heisenberg action "
            "(a trace-preserving Schrodinger channel); got a map that moves the unit"
        )


def kappa_theory_upper(ctx: SeminormContext, Q: np.ndarray | None = None) -> float:
    """Rigorous upper bound on sup{||x - E(x)|| : |||x||| <= 1} over span(Q).

    From |||x||| <= 1 the stacked commutator map T has ||Tx||_F^2 <= m*D
    (l-infinity kind; <= D for the l2 kind), so ||x||_F <= sqrt(m D)/sigma_min(T).
    """
    Quse = ctx.Q if Q is None else Q
    D = ctx.dim
    eye = np.eye(D, dtype=complex)
    Bv = ctx.basis.reshape(D * D, D * D)
    V = Bv.T @ Quse  # columns: vec of free directions
    rows = []
    for s in ctx.elements:
        L = np.kron(s, eye) - np.kron(eye, s.T)
        rows.append(L @ V)
    F = np.concatenate(rows, axis=0)
    smin = float(np.linalg.svd(F, compute_uv=False)[-1])
    if smin <= 1e-14:
        return math.inf
    m = len(ctx.elements)
    budget = m * D if ctx.spec.kind == KIND_LINF else D
    return math.sqrt(budget) / smin


def _displacement_upper(heis_real: np.ndarray, dim: int, is_channel: bool) -> float:
    """Rigorous bound on sup{||T(x)-x||_op : ||x||_op <= 1} over Hermitians."""
    disp = heis_real - np.eye(heis_real.shape[0])
    smax = float(np.linalg.svd(disp, compute_uv=False)[0])
    bound = math.sqrt(dim) * smax
    if is_channel:
        bound = min(bound, 2.0)
    return bound


def commutant_fixed_defect(heis_real: np.ndarray, ctx: SeminormContext) -> tuple[float, int]:
    """Worst Frobenius displacement of a commutant basis element, and its index."""
    moved = heis_real @ ctx.commutant_coords - ctx.commutant_coords
    norms = np.linalg.norm(moved, axis=0)
    k = int(np.argmax(norms))
    return float(norms[k]), k


def evaluate_cost_ratio(map_like: MapLike, spec: SeminormSpec, X, context: SeminormContext | None = None) -> float:
    """||Phi(X) - X|| / |||X||| for a single Hermitian witness."""
    ctx = context or build_context(spec)
    big = _ambient_map(map_like, spec)
    M = require_hermitian(X, 1e-9)
    sn = ctx.seminorm_of(M)
    if sn <= 1e-14:
        return math.inf
    return op_norm(big.heisenberg(M) - M) / sn


def cost(
    map_like: MapLike,
    spec: SeminormSpec,
    options: AscentOptions | None = None,
    seed: int = 0,
    subspace: list[np.ndarray] | None = None,
    extra_witnesses: list[np.ndarray] | None = None,
    context: SeminormContext | None = None,
) -> CostReport:
    """Transportation cost sup{||Phi(x) - x|| : x = x*, |||x||| <= 1}.

    Requires the Heisenberg action to be unital and to fix the commutant of
    the resource set elementwise; otherwise the supremum is infinite and the
    report carries a diagnostic commutant element.  ``subspace`` restricts the
    optimization to the span of the given Hermitian matrices (used by the
    commutative group embedding).
    """
    ctx = context or build_context(spec)
    big = _ambient_map(map_like, spec)
    _require_heis_unital(big)
    heis_real = heis_coords(big, ctx.basis)

    work = ctx if subspace is None else ctx.restrict(subspace)
    if subspace is None:
        zero_dirs = ctx.commutant_coords
    else:
        # within a restricted problem only the subspace's own null directions blow up
        from .ascent import complement_within, orthonormal_columns

        QV = orthonormal_columns(
            np.stack([to_coords(require_hermitian(S, 1e-9), ctx.basis) for S in subspace]).T
        )
        zero_dirs = complement_within(QV, work.Q)
    if zero_dirs.shape[1]:
        moved = heis_real @ zero_dirs - zero_dirs
        norms = np.linalg.norm(moved, axis=0)
        k = int(np.argmax(norms))
        if norms[k] > 1e-8:
            bad = from_coords(zero_dirs[:, k], ctx.basis)
            return CostReport(
                math.inf, math.inf, bad, ["commutant-not-fixed", f"defect={norms[k]:.3e}"], seed
            )
    opts = options or AscentOptions()
    disp = heis_real - np.eye(heis_real.shape[0])

    starts: list[np.ndarray] = []
    _, _, Vh = np.linalg.svd(disp @ work.Q, full_matrices=False)
    for row in Vh[:3]:
        starts.append(work.Q @ row)
    for W in extra_witnesses or []:
        starts.append(to_coords(require_hermitian(W, 1e-9), ctx.basis))

    obj = RatioObjective(ctx.basis, work.Q, opnorm_of_map_term(disp, ctx.basis), work.denominator())
    res = maximize_ratio(obj, seed, opts, extra_starts=starts)

    X = from_coords(res.witness_coords, ctx.basis)
    sn = work.seminorm_of(X)
    X = X / sn
    lower = op_norm(big.heisenberg(X) - X)
    for W in extra_witnesses or []:
        val = evaluate_cost_ratio(big, spec, W, context=ctx)
        if val > lower:
            lower, X = val, require_hermitian(W, 1e-9) / ctx.seminorm_of(np.asarray(W, dtype=complex))

    is_channel = isinstance(map_like, (QuantumChannel, ConditionalExpectation)) or getattr(
        map_like, "assume_channel", True
    )
    upper = kappa_theory_upper(ctx, work.Q) * _displacement_upper(heis_real, ctx.dim, is_channel)
    upper = max(upper, lower)
    return CostReport(
        lower,
        upper,
        X,
        [METHOD_ASCENT_LOWER, METHOD_THEORY_UPPER],
        seed,
        checks=[{"name": "ascent-spread", "value": res.spread}],
    )


def expected_length(
    resource: ResourceSet,
    kind: str = KIND_LINF,
    amplification: int = 1,
    options: AscentOptions | None = None,
    seed: int = 0,
    context: SeminormContext | None = None,
) -> CostReport:
    """kappa(S) = transportation cost of the conditional expectation onto S'.

    The value is a lower bound at the given amplification level; the complete
    (all-levels) quantity is at least this large.
    """
    spec = SeminormSpec(resource, kind, amplification)
    efix = conditional_expectation(resource)
    rep = cost(efix, spec, options=options, seed=seed, context=context)
    rep.method.append(f"level-{amplification}-lower")
    return rep


def wasserstein(
    rho,
    sigma,
    spec: SeminormSpec,
    options: AscentOptions | None = None,
    seed: int = 0,
    context: SeminormContext | None = None,
) -> CostReport:
    """Wasserstein L-metric W(rho, sigma) = dual seminorm of rho - sigma."""
    r = require_density(rho)
    s = require_density(sigma)
    if r.shape != s.shape:
        raise ValueError("states must share a dimension")
    return dual_seminorm(spec, r - s, options=options, seed=seed, context=context)


def _fast_dual_value(spec: SeminormSpec, f: np.ndarray, ctx: SeminormContext, seed: int) -> float:
    if is_pauli_spec(spec):
        return pauli_dual_value(spec, f)[0]
    rep = dual_seminorm(
        spec, f, options=AscentOptions(restarts=16, iterations=150, polish_rounds=8), seed=seed, context=ctx
    )
    return rep.lower


def cost_via_states(
    map_like: MapLike,
    spec: SeminormSpec,
    n_states: int = 256,
    options: AscentOptions | None = None,
    seed: int = 0,
    context: SeminormContext | None = None,
) -> CostReport:
    """Lower bound on the cost as sup over states of W(rho, Phi_*(rho)).

    Pure states suffice (the objective is a sup of linear functionals of rho);
    the best sampled state is refined by a seeded local search.
    """
    ctx = context or build_context(spec)
    big = _ambient_map(map_like, spec)
    D = ctx.dim
    rng = np.random.default_rng([0xCB57, seed & 0xFFFFFFFF])

    def w_of_vec(v: np.ndarray) -> float:
        rho = np.outer(v, v.conj())
        f = rho - big.schrodinger(rho)
        f = linalg.hermitian_part(f)
        return _fast_dual_value(spec, f - np.trace(f).real * np.eye(D) / D, ctx, seed)

    best_val, best_vec = -1.0, None
    for _ in range(n_states):
        v = rng.standard_normal(D) + 1j * rng.standard_normal(D)
        v /= np.linalg.norm(v)
        val = w_of_vec(v)
        if val > best_val:
            best_val, best_vec = val, v

    radius = 0.3
    for _ in range(24):
        improved = False
        for _ in range(8):
            v = best_vec + radius * (rng.standard_normal(D) + 1j * rng.standard_normal(D))
            v /= np.linalg.norm(v)
            val = w_of_vec(v)
            if val > best_val:
                best_val, best_vec, improved = val, v, True
        if not improved:
            radius *= 0.6
            if radius < 1e-4:
                break

    # re-evaluate the winner with the full dual budget
    rho = np.outer(best_vec, best_vec.conj())
    f = linalg.hermitian_part(rho - big.schrodinger(rho))
    f -= np.trace(f).real * np.eye(D) / D
    final = dual_seminorm(spec, f, options=options, seed=seed, context=ctx)
    lower = max(final.lower, best_val)
    return CostReport(lower, math.inf, rho, [METHOD_SAMPLE_MAX, f"states={n_states}"], seed)


def tensor_witness(f1, f2) -> np.ndarray:
    """Joint witness f1 (x) 1 + 1 (x) f2 realizing cost superadditivity."""
    A = require_hermitian(f1, 1e-9)
    B = require_hermitian(f2, 1e-9)
    return np.kron(A, np.eye(B.shape[0], dtype=complex)) + np.kron(np.eye(A.shape[0], dtype=complex), B)


# ---------------------------------------------------------------------------
# iterated-channel cost trajectories (shared by the mixing module)


def cost_iterates(
    channel: MapLike,
    spec: SeminormSpec,
    steps: int,
    kappa_report: CostReport,
    options: AscentOptions | None = None,
    seed: int = 0,
    context: SeminormContext | None = None,
) -> list[float]:
    """Matched lower estimates of Cost(Phi^n) for n = 1..steps.

    Each step reuses the expected-length witness (same seed and oracle as the
    kappa estimate) and tops it up with a reduced-budget ascent, so ratios
    against kappa are meaningful.
    """
    ctx = context or build_context(spec)
    base = _ambient_map(channel, spec)
    S = base.schro_superop()
    opts = (options or AscentOptions()).scaled(restarts=12, iterations=120)
    out = []
    power = np.eye(S.shape[0], dtype=complex)
    for n in range(1, steps + 1):
        power = power @ S
        step_map = MatrixMap(ctx.dim, power)
        rep = cost(
            step_map,
            spec,
            options=opts,
            seed=seed,
            extra_witnesses=None if kappa_report.witness is None else [kappa_report.witness],
            context=ctx,
        )
        out.append(rep.lower)
    return out


# ---------------------------------------------------------------------------
# property harness for the structural facts about the cost


def property_harness_cost(
    channels: list[QuantumChannel],
    spec: SeminormSpec,
    n_instances: int = 50,
    seed: int = 0,
    eps: float = 0.1,
    options: AscentOptions | None = None,
) -> dict:
    """Check the exact pointwise inequalities behind the cost calculus.

    (a) composition triangle, (b) universal-bound chain through E_fix,
    (c) convexity of matched cost estimates, (d) the mixing-time lower bound
    (1-eps) kappa <= t * Cost.  Channels must share the dimension and fix the
    commutant of the resource set.
    """
    ctx = build_context(spec)
    efix = conditional_expectation(spec.resource)
    rng = np.random.default_rng([0x9A37, seed & 0xFFFFFFFF])
    D = ctx.dim
    checks: list[dict] = []

    worst_a = worst_b1 = worst_b2 = 0.0
    for _ in range(n_instances):
        x = linalg.random_hermitian(rng, D)
        phi = channels[int(rng.integers(len(channels)))]
        psi = channels[int(rng.integers(len(channels)))]
        phi_b = _ambient_map(phi, spec)
        psi_b = _ambient_map(psi, spec)
        px = psi_b.heisenberg(x)
        lhs = op_norm(phi_b.heisenberg(px) - x)
        rhs = op_norm(phi_b.heisenberg(px) - px) + op_norm(px - x)
        worst_a = max(worst_a, lhs - rhs)

        ex = efix.apply(x)
        move = op_norm(phi_b.heisenberg(x) - x)
        chain = op_norm((phi_b.heisenberg(x - ex)) - (x - ex))
        worst_b1 = max(worst_b1, move - chain)
        heis_real = heis_coords(phi_b, ctx.basis)
        op_up = _displacement_upper(heis_real, D, True)
        worst_b2 = max(worst_b2, move - op_up * op_norm(ex - x))
    checks.append({"name": "composition-triangle", "worst_slack": worst_a, "passed": worst_a <= 1e-10})
    checks.append({"name": "universal-chain-exact", "worst_slack": worst_b1, "passed": worst_b1 <= 1e-10})
    checks.append({"name": "universal-chain-norm", "worst_slack": worst_b2, "passed": worst_b2 <= 1e-10})

    # (c) convexity of matched estimates
    opts = (options or AscentOptions()).scaled(restarts=24, iterations=150)
    conv_ok = True
    worst_c = 0.0
    for lam in (0.25, 0.5, 0.75):
        phi, psi = channels[0], channels[-1]
        from .channel import mix_channels

        mixed = mix_channels([(lam, phi), (1 - lam, psi)])
        rep_mix = cost(mixed, spec, options=opts, seed=seed, context=ctx)
        pool = [rep_mix.witness] if rep_mix.witness is not None else None
        rep_phi = cost(phi, spec, options=opts, seed=seed, extra_witnesses=pool, context=ctx)
        rep_psi = cost(psi, spec, options=opts, seed=seed, extra_witnesses=pool, context=ctx)
        bound = lam * rep_phi.lower + (1 - lam) * rep_psi.lower
        slack = rep_mix.lower - bound
        worst_c = max(worst_c, slack - 0.02 * max(bound, 1e-12))
        conv_ok = conv_ok and slack <= 0.02 * max(bound, 1e-12)
    checks.append({"name": "convexity", "worst_slack": worst_c, "passed": conv_ok})

    # (d) cost lower bound through the cost-induced mixing time
    kappa = expected_length(spec.resource, spec.kind, spec.amplification, options=opts, seed=seed, context=ctx)
    dok = True
    for ch in channels[:2]:
        rep = cost(ch, spec, options=opts, seed=seed, context=ctx)
        if rep.lower <= 1e-12:
            continue  # identity-like channel never crosses
        traj = cost_iterates(ch, spec, 64, kappa, options=opts, seed=seed, context=ctx)
        t = next((n + 1 for n, v in enumerate(traj) if v >= (1 - eps) * kappa.lower), None)
        if t is None:
            continue
        dok = dok and (1 - eps) * kappa.lower <= t * rep.lower * (1 + 1e-6)
    checks.append({"name": "mixing-cost-lower-bound", "passed": dok})

    return {"checks": checks, "passed": all(c["passed"] for c in checks), "seed": seed}
