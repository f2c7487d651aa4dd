"""Lipschitz constants, BKM geometry, entropy contraction, and the qubit closed forms.

The channel convention follows the state-side picture: a ``QuantumChannel``
acts on states through ``schrodinger`` and the associated observable map (its
Hilbert-Schmidt adjoint) through ``heisenberg``.  ``lip`` measures the
seminorm amplification factor of the Heisenberg action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .ascent import AscentOptions, RatioObjective, maximize_ratio, seminorm_term
from .channel import MatrixMap, QuantumChannel, mix_channels, replacer_channel
from .linalg import (
    dagger,
    from_coords,
    hermitian_basis,
    hermitian_part,
    op_norm,
    require_density,
    require_hermitian,
)
from .report import METHOD_ASCENT_LOWER, METHOD_THEORY_UPPER, CostReport
from .seminorm import (
    SeminormContext,
    SeminormSpec,
    build_context,
    is_pauli_spec,
    pauli_dual_value,
    seminorm_batch,
)
from .transport import MapLike, _ambient_map, commutant_fixed_defect, heis_coords, kappa_theory_upper

SUPPORT_TOL = 1e-10


# ---------------------------------------------------------------------------
# Lipschitz constant


def lip(
    map_like: MapLike,
    spec: SeminormSpec,
    options: AscentOptions | None = None,
    seed: int = 0,
    extra_witnesses: list[np.ndarray] | None = None,
    context: SeminormContext | None = None,
) -> CostReport:
    """Lipschitz constant sup{|||Phi(x)||| : x = x*, |||x||| <= 1} of the Heisenberg action.

    Lower bound by ratio ascent.  When the map fixes the commutant elementwise
    the universal bound 2 sup_s ||s|| * kappa-upper caps it from above; when
    the commutant is not even invariant the constant is infinite.
    """
    ctx = context or build_context(spec)
    big = _ambient_map(map_like, spec)
    heis_real = heis_coords(big, ctx.basis)
    P = ctx.commutant_coords

    leak = heis_real @ P - P @ (P.T @ (heis_real @ P))
    if float(np.max(np.linalg.norm(leak, axis=0))) > 1e-8:
        k = int(np.argmax(np.linalg.norm(leak, axis=0)))
        bad = from_coords(P[:, k], ctx.basis)
        return CostReport(math.inf, math.inf, bad, ["commutant-not-invariant"], seed)

    opts = options or AscentOptions()
    starts = []
    _, _, Vh = np.linalg.svd(heis_real @ ctx.Q, full_matrices=False)
    for row in Vh[:3]:
        starts.append(ctx.Q @ row)
    for W in extra_witnesses or []:
        starts.append(linalg.to_coords(require_hermitian(W, 1e-9), ctx.basis))

    obj = RatioObjective(
        ctx.basis,
        ctx.Q,
        seminorm_term(ctx.elements, ctx.spec.kind, ctx.basis, map_coords=heis_real),
        ctx.denominator(),
    )
    res = maximize_ratio(obj, seed, opts, extra_starts=starts)
    X = from_coords(res.witness_coords, ctx.basis)
    X = X / ctx.seminorm_of(X)
    lower = ctx.seminorm_of(hermitian_part(big.heisenberg(X)))

    defect, _ = commutant_fixed_defect(heis_real, ctx)
    if defect <= 1e-8:
        upper = 2.0 * max(op_norm(s) for s in ctx.elements) * kappa_theory_upper(ctx)
        tags = [METHOD_ASCENT_LOWER, METHOD_THEORY_UPPER]
    else:
        upper = math.inf
        tags = [METHOD_ASCENT_LOWER]
    return CostReport(
        lower, max(upper, lower), X, tags, seed, checks=[{"name": "ascent-spread", "value": res.spread}]
    )


def evaluate_lip_ratio(map_like: MapLike, spec: SeminormSpec, X, context: SeminormContext | None = None) -> float:
    ctx = context or build_context(spec)
    big = _ambient_map(map_like, spec)
    M = require_hermitian(X, 1e-9)
    sn = ctx.seminorm_of(M)
    if sn <= 1e-14:
        return math.inf
    return ctx.seminorm_of(hermitian_part(big.heisenberg(M))) / sn


def _fast_dual(spec: SeminormSpec, f: np.ndarray, ctx: SeminormContext, seed: int) -> float:
    if is_pauli_spec(spec):
        return pauli_dual_value(spec, f)[0]
    from .seminorm import dual_seminorm

    rep = dual_seminorm(
        spec, f, options=AscentOptions(restarts=16, iterations=150, polish_rounds=8), seed=seed, context=ctx
    )
    return rep.lower


def contraction_via_states(
    map_like: MapLike,
    spec: SeminormSpec,
    n_pairs: int = 200,
    seed: int = 0,
    context: SeminormContext | None = None,
) -> CostReport:
    """Lower bound on lip as the worst Wasserstein contraction ratio over state pairs."""
    ctx = context or build_context(spec)
    big = _ambient_map(map_like, spec)
    D = ctx.dim
    rng = np.random.default_rng([0xC0A7, seed & 0xFFFFFFFF])

    def ratio_of(rho: np.ndarray, sig: np.ndarray) -> float:
        f = hermitian_part(rho - sig)
        den = _fast_dual(spec, f, ctx, seed)
        if den < 1e-10:
            return -1.0
        img = hermitian_part(big.schrodinger(rho) - big.schrodinger(sig))
        return _fast_dual(spec, img, ctx, seed) / den

    best, pair = -1.0, None
    for _ in range(n_pairs):
        rho = linalg.random_mixed_state(rng, D)
        sig = linalg.random_mixed_state(rng, D)
        r = ratio_of(rho, sig)
        if r > best:
            best, pair = r, (rho, sig)

    radius = 0.2
    for _ in range(20):
        improved = False
        for _ in range(6):
            drho = linalg.random_hermitian(rng, D, radius)
            dsig = linalg.random_hermitian(rng, D, radius)
            try:
                rho = _project_state(pair[0] + drho)
                sig = _project_state(pair[1] + dsig)
            except ValueError:
                continue
            r = ratio_of(rho, sig)
            if r > best:
                best, pair, improved = r, (rho, sig), True
        if not improved:
            radius *= 0.6
            if radius < 1e-4:
                break
    witness = hermitian_part(pair[0] - pair[1]) if pair else None
    return CostReport(max(best, 0.0), math.inf, witness, ["sample-max", f"pairs={n_pairs}"], seed)


def _project_state(M: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(hermitian_part(M))
    w = np.clip(w, 1e-12, None)
    rho = (V * w) @ dagger(V)
    return rho / np.trace(rho).real


# ---------------------------------------------------------------------------
# BKM kernel machinery


def _bkm_kernel(w: np.ndarray) -> np.ndarray:
    """Matrix k_ij = (w_i - w_j)/(log w_i - log w_j), k_ii = w_i."""
    wi = w[:, None]
    wj = w[None, :]
    diff = wi - wj
    logdiff = np.log(wi) - np.log(wj)
    near = np.abs(diff) <= 1e-14 * np.maximum(wi, wj)
    safe = np.where(near, 1.0, logdiff)
    K = np.where(near, (wi + wj) / 2.0, diff / safe)
    return K


def _sigma_eig(sigma, min_eig: float = 1e-10):
    S = require_density(sigma)
    w, V = np.linalg.eigh(S)
    if w[0] <= min_eig:
        raise ValueError(f"state must be full rank (smallest eigenvalue {w[0]:.3e})")
    return w, V


def gamma_sigma(sigma, Y) -> np.ndarray:
    """Gamma_sigma(Y): entrywise BKM kernel in the eigenbasis of sigma."""
    w, V = _sigma_eig(sigma)
    Yt = dagger(V) @ linalg.as_complex_matrix(Y) @ V
    return V @ (_bkm_kernel(w) * Yt) @ dagger(V)


def gamma_sigma_inverse(sigma, Y) -> np.ndarray:
    w, V = _sigma_eig(sigma)
    Yt = dagger(V) @ linalg.as_complex_matrix(Y) @ V
    return V @ (Yt / _bkm_kernel(w)) @ dagger(V)


def gamma_superop(sigma) -> np.ndarray:
    """Row-major-vec superoperator of Gamma_sigma (Hermitian, positive definite)."""
    w, V = _sigma_eig(sigma)
    K = _bkm_kernel(w)
    W = np.kron(V, V.conj())
    return W @ np.diag(K.reshape(-1)) @ dagger(W)


@dataclass
class BkmOperator:
    """Gamma_sigma in a Hermitian operator basis, with its Gram matrix."""

    sigma: np.ndarray
    gamma_matrix: np.ndarray  # real coordinates of Gamma_sigma
    gram: np.ndarray  # symmetrized copy (the BKM Gram matrix)


def build_bkm(sigma, basis: np.ndarray | None = None) -> BkmOperator:
    S = require_density(sigma)
    d = S.shape[0]
    B = hermitian_basis(d) if basis is None else basis
    G = gamma_superop(S)
    Bv = B.reshape(B.shape[0], -1)
    Greal = np.real(Bv.conj() @ G @ Bv.T)
    gram = (Greal + Greal.T) / 2
    if float(np.linalg.eigvalsh(gram)[0]) <= 0:
        raise ValueError("BKM Gram matrix is not positive definite")
    return BkmOperator(S, Greal, gram)


def bkm_dual_map(channel: MapLike, sigma) -> MatrixMap:
    """Gamma^{-1} o Phi o Gamma as a map whose Heisenberg action is the BKM dual."""
    G = gamma_superop(sigma)
    Ginv = np.linalg.inv(G)
    S = channel.schro_superop()
    heis = Ginv @ S @ G
    return MatrixMap(channel.dim, heis.conj().T)


def fixed_state(channel: MapLike, gap_tol: float = 1e-8) -> np.ndarray:
    """Unique fixed state of the Schrodinger action; raises if not primitive."""
    S = channel.schro_superop()
    evals = np.linalg.eigvals(S)
    mult = int(np.sum(np.abs(evals - 1.0) <= gap_tol))
    if mult != 1:
        raise ValueError(f"channel is not primitive: eigenvalue-1 multiplicity {mult}")
    d = channel.dim
    _, _, Vh = np.linalg.svd(S - np.eye(d * d))
    rho = Vh[-1].conj().reshape(d, d)
    rho = hermitian_part(rho)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise ValueError("fixed-point candidate has vanishing trace")
    rho = rho / tr
    return rho


def bkm_lambda2(channel: MapLike, sym_tol: float = 1e-9) -> float:
    """Second-largest eigenvalue of Phi* o Phi^{*,BKM} in the BKM geometry.

    Requires a primitive channel with a full-rank fixed state.  The operator
    is symmetrized with the Gram square root and solved as a real symmetric
    eigenproblem; the top eigenvalue is 1.
    """
    sigma = fixed_state(channel)
    w = np.linalg.eigvalsh(sigma)
    if w[0] <= SUPPORT_TOL:
        raise ValueError(f"fixed state is rank deficient (eigenvalue {w[0]:.3e})")
    d = channel.dim
    basis = hermitian_basis(d)
    bkm = build_bkm(sigma, basis)
    heis_real = heis_coords(channel, basis)
    schro_real = heis_real.T
    G = bkm.gram
    M = heis_real @ np.linalg.solve(G, schro_real @ G)
    GA = G @ M
    defect = float(np.max(np.abs(GA - GA.T)))
    if defect > sym_tol * max(1.0, float(np.max(np.abs(GA)))):
        raise ValueError(f"BKM symmetry defect {defect:.3e} exceeds tolerance")
    wg, Vg = np.linalg.eigh(G)
    Ginvhalf = (Vg / np.sqrt(wg)) @ Vg.T
    K = Ginvhalf @ ((GA + GA.T) / 2) @ Ginvhalf
    ev = np.linalg.eigvalsh((K + K.T) / 2)[::-1]
    if abs(ev[0] - 1.0) > 1e-6:
        raise ValueError(f"leading BKM eigenvalue {ev[0]} is not 1; map is not a channel at sigma")
    return float(ev[1])


# ---------------------------------------------------------------------------
# relative entropy tooling


def relative_entropy(rho, sigma) -> float:
    """Umegaki relative entropy tr[rho(log rho - log sigma)]; +inf off-support."""
    R = require_density(rho)
    S = require_density(sigma)
    ws, Vs = np.linalg.eigh(S)
    keep = ws > SUPPORT_TOL
    if not np.all(keep):
        Pperp = (Vs[:, ~keep] @ dagger(Vs[:, ~keep]))
        if float(np.trace(R @ Pperp).real) > SUPPORT_TOL:
            return math.inf
    wr, Vr = np.linalg.eigh(R)
    pos = wr > 1e-15
    tr_rlogr = float(np.sum(wr[pos] * np.log(wr[pos])))
    logS = (Vs[:, keep] * np.log(ws[keep])) @ dagger(Vs[:, keep])
    tr_rlogs = float(np.trace(R @ logS).real)
    val = tr_rlogr - tr_rlogs
    return max(val, 0.0) if val > -1e-10 else val


def entropy_derivative(rho, drho, sigma) -> float:
    """d/dt D(rho + t drho || sigma) at t = 0 for full-rank rho and traceless drho."""
    R = require_density(rho)
    dR = require_hermitian(drho, 1e-9)
    if abs(float(np.trace(dR).real)) > 1e-9:
        raise ValueError("derivative direction must be traceless")
    if float(np.linalg.eigvalsh(R)[0]) <= SUPPORT_TOL:
        raise ValueError("derivative requires a full-rank state")
    diff = linalg.mat_log(R) - linalg.mat_log(require_density(sigma))
    return float(np.trace(dR @ diff).real)


def _diff_entropy_batch(rhos: np.ndarray, log_sigma: np.ndarray) -> np.ndarray:
    w, _ = np.linalg.eigh(rhos)
    wpos = np.where(w > 1e-15, w, 1.0)
    tr_rlogr = np.sum(np.where(w > 1e-15, w * np.log(wpos), 0.0), axis=1)
    tr_rlogs = np.real(np.einsum("rij,ji->r", rhos, log_sigma))
    return tr_rlogr - tr_rlogs


def sample_full_rank_states(rng: np.random.Generator, d: int, n: int, floor: float = 1e-3) -> np.ndarray:
    """Haar-induced mixed states floored with delta * I/d so the log is well conditioned."""
    V = rng.standard_normal((n, d * d)) + 1j * rng.standard_normal((n, d * d))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    W = V.reshape(n, d, d)
    rhos = np.einsum("rik,rjk->rij", W, W.conj())
    rhos = (rhos + dagger(rhos)) / 2
    return (1 - floor) * rhos + floor * np.eye(d) / d


def entropy_contraction_sample(
    channel: MapLike,
    sigma,
    n_states: int = 1000,
    seed: int = 0,
    floor: float = 1e-3,
) -> tuple[float, np.ndarray]:
    """Sampled lower bound on the entropy contraction coefficient toward sigma."""
    S = require_density(sigma)
    d = S.shape[0]
    rng = np.random.default_rng([0xE27, seed & 0xFFFFFFFF])
    rhos = sample_full_rank_states(rng, d, n_states, floor)
    sup = channel.schro_superop()
    imgs = (rhos.reshape(n_states, -1) @ sup.T).reshape(n_states, d, d)
    imgs = (imgs + dagger(imgs)) / 2
    logS = linalg.mat_log(S)
    den = _diff_entropy_batch(rhos, logS)
    num = _diff_entropy_batch(imgs, logS)
    ok = den > 1e-14
    ratios = np.where(ok, num / np.where(ok, den, 1.0), -np.inf)
    k = int(np.argmax(ratios))
    return float(ratios[k]), rhos[k]


def refine_contraction_candidate(
    channel: MapLike, sigma, rho0, t_grid: np.ndarray | None = None
) -> tuple[float, np.ndarray]:
    """Shrink a candidate optimizer toward sigma along a line, keeping the best ratio."""
    S = require_density(sigma)
    ts = np.geomspace(1.0, 1e-3, 25) if t_grid is None else t_grid
    best, best_rho = -1.0, rho0
    for t in ts:
        rho = S + t * (rho0 - S)
        den = relative_entropy(rho, S)
        if den < 1e-14:
            continue
        r = relative_entropy(hermitian_part(channel.schrodinger(rho)), S) / den
        if r > best:
            best, best_rho = r, rho
    return best, best_rho


def optimizer_residual(channel: MapLike, sigma, rho, eta: float) -> float:
    """Residual of the stationarity equation Phi*(log Phi(rho) - log sigma) = eta (log rho - log sigma)."""
    S = require_density(sigma)
    R = require_density(rho)
    img = hermitian_part(channel.schrodinger(R))
    lhs = channel.heisenberg(linalg.mat_log(img) - linalg.mat_log(S))
    rhs = eta * (linalg.mat_log(R) - linalg.mat_log(S))
    return op_norm(hermitian_part(lhs) - rhs)


# ---------------------------------------------------------------------------
# logarithmic Lipschitz constant


@dataclass
class LogLipSample:
    value: float
    witness: np.ndarray | None
    skipped: int
    n_states: int


def loglip_sample(
    channel: MapLike,
    sigma,
    spec: SeminormSpec,
    n_states: int = 400,
    seed: int = 0,
    floor: float = 1e-3,
    context: SeminormContext | None = None,
) -> LogLipSample:
    """Sampled lower bound on sup_rho |||log Phi(rho) - log sigma||| / |||log rho - log sigma|||."""
    ctx = context or build_context(spec)
    S = require_density(sigma)
    d = S.shape[0]
    rng = np.random.default_rng([0x106, seed & 0xFFFFFFFF])
    rhos = sample_full_rank_states(rng, d, n_states, floor)
    sup = channel.schro_superop()
    imgs = (rhos.reshape(n_states, -1) @ sup.T).reshape(n_states, d, d)
    imgs = (imgs + dagger(imgs)) / 2
    logS = linalg.mat_log(S)

    wi = np.linalg.eigvalsh(imgs)
    alive = wi[:, 0] > 1e-12
    skipped = int(n_states - np.sum(alive))

    def batched_log(Ms: np.ndarray) -> np.ndarray:
        w, V = np.linalg.eigh(Ms)
        w = np.clip(w, 1e-300, None)
        return np.einsum("rik,rk,rjk->rij", V, np.log(w), V.conj())

    num_mats = batched_log(imgs[alive]) - logS
    den_mats = batched_log(rhos[alive]) - logS
    num = seminorm_batch(ctx.spec, num_mats)
    den = seminorm_batch(ctx.spec, den_mats)
    ok = den > 1e-12
    ratios = np.where(ok, num / np.where(ok, den, 1.0), -np.inf)
    if not ratios.size or not np.any(np.isfinite(ratios)):
        return LogLipSample(0.0, None, skipped, n_states)
    k = int(np.argmax(ratios))
    return LogLipSample(float(ratios[k]), rhos[alive][k], skipped, n_states)


def f_p(p: float, x: float) -> float:
    """Qubit depolarizing log-ratio |log((1+2(1-p)x)/(1-2(1-p)x))| / |log((1+2x)/(1-2x))|.

    Even in x, nonincreasing on (0, 1/2), with limit 1-p at 0.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if not abs(x) < 0.5:
        raise ValueError("x must lie in (-1/2, 1/2)")
    if x == 0.0:
        raise ValueError("x must be nonzero (the limit at 0 is 1-p)")
    q = 1.0 - p
    num = abs(math.log(1 + 2 * q * x) - math.log(1 - 2 * q * x))
    den = abs(math.log(1 + 2 * x) - math.log(1 - 2 * x))
    return num / den


# ---------------------------------------------------------------------------
# assembled entropy-contraction upper-bound check


def lazy_channel(channel: QuantumChannel, lam: float = 0.5, sigma=None) -> QuantumChannel:
    """Mixture with the replacer to sigma (default: the fixed state); strictly positive."""
    target = fixed_state(channel) if sigma is None else require_density(sigma)
    return mix_channels([(1 - lam, channel), (lam, replacer_channel(target))])


def strict_positivity_floor(channel: MapLike, n_states: int = 100, seed: int = 0) -> float:
    """Smallest eigenvalue of Phi(rho) over sampled pure states."""
    d = channel.dim
    rng = np.random.default_rng([0x57C7, seed & 0xFFFFFFFF])
    worst = math.inf
    for _ in range(n_states):
        rho = linalg.random_pure_state(rng, d)
        img = hermitian_part(channel.schrodinger(rho))
        worst = min(worst, float(np.linalg.eigvalsh(img)[0]))
    return worst


def entropy_upper_check(
    channel: QuantumChannel,
    sigma,
    spec: SeminormSpec,
    n_states: int = 2000,
    seed: int = 0,
    options: AscentOptions | None = None,
    context: SeminormContext | None = None,
) -> dict:
    """Compare the sampled entropy contraction against the Lipschitz upper bound.

    The right-hand side is Lip(Phi*) * max{Lip(Phi^{*,BKM}), LogLip}, assembled
    from estimator values; a composite variant max{lambda_2-route, Lip*LogLip}
    is reported as well.  All components are estimates, so callers compare
    with estimator slack.
    """
    floor = strict_positivity_floor(channel, seed=seed)
    if floor <= 1e-12:
        raise ValueError(
            "channel is not strictly positive on sampled pure states; "
            "mix it with the replacer to its fixed state (lazy mixture) first"
        )
    ctx = context or build_context(spec)
    S = require_density(sigma)
    lhs, argmax_rho = entropy_contraction_sample(channel, S, n_states=n_states, seed=seed)
    opts = options or AscentOptions()
    lip_star = lip(channel, spec, options=opts, seed=seed, context=ctx).lower
    lip_bkm = lip(bkm_dual_map(channel, S), spec, options=opts, seed=seed, context=ctx).lower
    llip = loglip_sample(channel, S, spec, seed=seed, context=ctx).value
    lam2 = bkm_lambda2(channel)
    rhs = lip_star * max(lip_bkm, llip)
    rhs_composite = max(lam2, lip_star * llip)
    return {
        "lhs_sampled": lhs,
        "lip_star": lip_star,
        "lip_bkm_dual": lip_bkm,
        "loglip": llip,
        "lambda2": lam2,
        "rhs": rhs,
        "rhs_composite": rhs_composite,
        "margin": rhs - lhs,
        "argmax_state_trace_dist": float(0.5 * linalg.trace_norm(argmax_rho - S)),
        "seed": seed,
    }
