"""Acceptance suites: every exit criterion as a named, seeded, tolerance-pinned check.

Each criterion function returns a :class:`CriterionResult` whose ``details``
spell out the measured quantities; failures name the violated mathematical
claim.  Suites group the criteria for the ``verify`` CLI command, and the
pytest acceptance module runs them one by one.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .ascent import AscentOptions
from .channel import (
    ConditionalExpectation,
    conditional_expectation,
    depolarizing_channel,
    identity_channel,
    index,
    mix_channels,
    tensor_channel,
    unitary_channel,
)
from .contraction import (
    bkm_lambda2,
    contraction_via_states,
    entropy_contraction_sample,
    entropy_derivative,
    f_p,
    gamma_sigma_inverse,
    lip,
    relative_entropy,
    sample_full_rank_states,
)
from .geometry import random_su2, su2_l2_spec, verify_cc_bound
from .groups import cyclic_group, dihedral_group, embed_commutative, group_cost_efix, symmetric_group, word_lengths
from .mixing import cost_mixing_time, lip_cost_bridge_check, return_time, trace_mixing_time
from .seminorm import (
    ResourceSet,
    SeminormSpec,
    build_context,
    gell_mann_resource,
    group_seminorm,
    joint_resource,
    pauli_resource,
    seminorm,
)
from .transport import cost, cost_via_states, expected_length, tensor_witness

KAPPA_PAULI = math.sqrt(6.0) / 4.0


@dataclass
class CriterionResult:
    criterion: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "passed": self.passed,
            "details": _jsonable(self.details),
            "elapsed_s": round(self.elapsed, 3),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def _timed(criterion: int, name: str, fn) -> CriterionResult:
    t0 = time.perf_counter()
    passed, details = fn()
    return CriterionResult(criterion, name, bool(passed), details, time.perf_counter() - t0)


def random_unital_qubit_channel(seed: int, terms: int = 4):
    """Seeded mixed-unitary qubit channel (unital and trace preserving)."""
    rng = np.random.default_rng([0xAB, seed & 0xFFFFFFFF])
    ps = rng.dirichlet(np.ones(terms))
    return mix_channels([(float(p), unitary_channel(linalg.random_unitary(rng, 2))) for p in ps])


# ---------------------------------------------------------------------------
# criterion 1: word-length identity (exact) + quantum embedding within 2%


def criterion_word_length(seed: int = 0) -> CriterionResult:
    def body():
        groups = [cyclic_group(n) for n in range(2, 13)] + [dihedral_group(4), symmetric_group(3), symmetric_group(4)]
        exact_ok = True
        rows = []
        for G in groups:
            prof = word_lengths(G)
            mean, checks = group_cost_efix(G)
            ok = (
                mean == prof.mean
                and checks["witness_seminorm_ok"]
                and checks["witness_sup_ge_mean"]
            )
            # upper-direction spot check on random Lipschitz functions
            rng = np.random.default_rng([G.order, seed & 0xFFFFFFFF])
            for _ in range(20):
                f = rng.standard_normal(G.order)
                sn = group_seminorm(G, f)
                if sn < 1e-12:
                    continue
                f = f / sn
                dev = float(np.max(np.abs(f - np.mean(f))))
                ok = ok and dev <= float(mean) + 1e-9
            exact_ok = exact_ok and ok
            rows.append({"group": G.name, "mean": mean, "ok": ok})

        embed_ok = True
        embed_rows = []
        for G in [cyclic_group(4), cyclic_group(6), cyclic_group(8), symmetric_group(3), dihedral_group(4)]:
            emb = embed_commutative(G)
            spec = SeminormSpec(emb.resource)
            exact = float(word_lengths(G).mean)
            rep = cost(
                emb.efix,
                spec,
                options=AscentOptions(restarts=48, iterations=220),
                seed=seed,
                subspace=emb.diagonal_basis,
            )
            ok = exact * 0.98 <= rep.lower <= exact * (1 + 1e-9)
            embed_ok = embed_ok and ok
            embed_rows.append({"group": G.name, "estimate": rep.lower, "exact": exact, "ok": ok})
        return exact_ok and embed_ok, {"exact": rows, "embeddings": embed_rows}

    res = _timed(1, "word-length-identity", body)
    res.details["runtime_bound_s"] = 10.0
    res.passed = res.passed and res.elapsed < 10.0
    return res


# ---------------------------------------------------------------------------
# criterion 2: qubit Pauli seminorm closed form


def criterion_pauli_closed_form(seed: int = 0) -> CriterionResult:
    def body():
        spec = SeminormSpec(pauli_resource())
        rng = np.random.default_rng([2, seed & 0xFFFFFFFF])
        worst = 0.0
        for _ in range(1000):
            X = linalg.random_hermitian(rng, 2)
            _, v1, v2, v3 = linalg.pauli_decompose(X)
            closed = 2.0 * max(math.hypot(v1, v2), math.hypot(v2, v3), math.hypot(v1, v3))
            worst = max(worst, abs(seminorm(spec, X) - closed))
        return worst <= 1e-10, {"worst_abs_error": worst, "tolerance": 1e-10, "samples": 1000}

    return _timed(2, "pauli-seminorm-closed-form", body)


# ---------------------------------------------------------------------------
# criterion 3: depolarizing exactness of the seminorm identity and lip


def criterion_depolarizing_exactness(seed: int = 0) -> CriterionResult:
    def body():
        rng = np.random.default_rng([3, seed & 0xFFFFFFFF])
        worst_id = 0.0
        worst_lip = 0.0
        worst_spread = 0.0
        opts = AscentOptions(restarts=12, iterations=60, polish_rounds=4)
        for d, resource in ((2, pauli_resource()), (3, gell_mann_resource(3))):
            spec = SeminormSpec(resource)
            ctx = build_context(spec)
            for p in (0.0, 0.25, 0.5, 0.75, 1.0):
                ch = depolarizing_channel(d, p)
                for _ in range(40):
                    X = linalg.random_hermitian(rng, d)
                    lhs = seminorm(spec, linalg.hermitian_part(ch.heisenberg(X)))
                    worst_id = max(worst_id, abs(lhs - (1 - p) * seminorm(spec, X)))
                rep = lip(ch, spec, options=opts, seed=seed, context=ctx)
                worst_lip = max(worst_lip, abs(rep.lower - (1 - p)))
                worst_spread = max(worst_spread, rep.checks[0]["value"])
        ok = worst_id <= 1e-10 and worst_lip <= 1e-10 and worst_spread <= 1e-10
        return ok, {
            "worst_identity_error": worst_id,
            "worst_lip_error": worst_lip,
            "worst_estimator_spread": worst_spread,
            "tolerance": 1e-10,
        }

    return _timed(3, "depolarizing-exactness", body)


# ---------------------------------------------------------------------------
# criterion 4: second BKM eigenvalue of the qubit depolarizing family


def criterion_lambda2(seed: int = 0) -> CriterionResult:
    def body():
        worst = 0.0
        for p in np.arange(0.1, 0.95, 0.1):
            lam = bkm_lambda2(depolarizing_channel(2, float(p)))
            worst = max(worst, abs(lam - (1 - p) ** 2))
        return worst <= 1e-8, {"worst_abs_error": worst, "tolerance": 1e-8}

    return _timed(4, "depolarizing-lambda2", body)


# ---------------------------------------------------------------------------
# criterion 5: entropy contraction bound over 10^4 states


def criterion_entropy_contraction(seed: int = 0) -> CriterionResult:
    def body():
        eye2 = np.eye(2) / 2
        rows = []
        ok = True
        for p in np.arange(0.1, 0.95, 0.1):
            p = float(p)
            mx, _ = entropy_contraction_sample(depolarizing_channel(2, p), eye2, n_states=10_000, seed=seed)
            bound = (1 - p) ** 2
            good = mx <= bound + 1e-8
            ok = ok and good
            rows.append({"p": p, "max_ratio": mx, "bound": bound, "ok": good})
        return ok, {"grid": rows, "states": 10_000, "tolerance": 1e-8}

    res = _timed(5, "entropy-contraction-bound", body)
    res.details["runtime_bound_s"] = 30.0
    res.passed = res.passed and res.elapsed < 30.0
    return res


# ---------------------------------------------------------------------------
# criterion 6: the depolarizing log-ratio function


def criterion_logratio_function(seed: int = 0) -> CriterionResult:
    def body():
        xs = np.linspace(1e-4, 0.5 - 1e-4, 1000)
        worst_even = 0.0
        worst_mono = -1.0
        worst_limit = 0.0
        for p in (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0):
            vals = np.array([f_p(p, float(x)) for x in xs])
            worst_mono = max(worst_mono, float(np.max(np.diff(vals))))
            for x in (0.05, 0.2, 0.4):
                worst_even = max(worst_even, abs(f_p(p, x) - f_p(p, -x)))
            worst_limit = max(worst_limit, abs(f_p(p, 1e-6) - (1 - p)))
        ok = worst_even < 1e-12 and worst_mono <= 1e-12 and worst_limit <= 1e-5
        return ok, {
            "worst_evenness": worst_even,
            "worst_monotonicity_slack": worst_mono,
            "worst_limit_error": worst_limit,
        }

    return _timed(6, "logratio-function-suite", body)


# ---------------------------------------------------------------------------
# criterion 7: duality consistency of the two sup formulas


def criterion_duality(seed: int = 0) -> CriterionResult:
    def body():
        spec = SeminormSpec(pauli_resource())
        ctx = build_context(spec)
        opts = AscentOptions(restarts=48, iterations=250)
        rows = []
        ok = True
        channels = [("depolarizing", depolarizing_channel(2, float(p))) for p in np.arange(0.1, 0.95, 0.1)]
        channels += [(f"random-unital-{k}", random_unital_qubit_channel(k)) for k in range(10)]
        for name, ch in channels:
            rc = cost(ch, spec, options=opts, seed=seed, context=ctx)
            rs = cost_via_states(ch, spec, n_states=192, seed=seed, context=ctx)
            rel_c = abs(rc.lower - rs.lower) / max(rc.lower, 1e-12)
            rl = lip(ch, spec, options=opts, seed=seed, context=ctx)
            rp = contraction_via_states(ch, spec, n_pairs=120, seed=seed, context=ctx)
            rel_l = abs(rl.lower - rp.lower) / max(rl.lower, 1e-12)
            good = rel_c <= 0.02 and rel_l <= 0.02
            ok = ok and good
            rows.append(
                {"channel": name, "cost": rc.lower, "cost_via_states": rs.lower, "rel_cost": rel_c,
                 "lip": rl.lower, "contraction_via_states": rp.lower, "rel_lip": rel_l, "ok": good}
            )
        return ok, {"rows": rows, "tolerance_rel": 0.02}

    return _timed(7, "duality-consistency", body)


# ---------------------------------------------------------------------------
# criterion 8: exact pointwise inequalities


def criterion_pointwise_inequalities(seed: int = 0) -> CriterionResult:
    def body():
        rng = np.random.default_rng([8, seed & 0xFFFFFFFF])
        efix = conditional_expectation(pauli_resource())
        spec = SeminormSpec(pauli_resource())
        pool = [random_unital_qubit_channel(k) for k in range(6)]
        pool += [depolarizing_channel(2, p) for p in (0.2, 0.5, 0.8)]
        sup_s = 1.0  # Pauli operators have unit norm
        worst_a = worst_b = worst_l = -math.inf
        for _ in range(500):
            x = linalg.random_hermitian(rng, 2)
            phi = pool[int(rng.integers(len(pool)))]
            psi = pool[int(rng.integers(len(pool)))]
            px = linalg.hermitian_part(psi.heisenberg(x))
            lhs = linalg.op_norm(phi.heisenberg(px) - x)
            rhs = linalg.op_norm(phi.heisenberg(px) - px) + linalg.op_norm(px - x)
            worst_a = max(worst_a, lhs - rhs)

            ex = efix.apply(x)
            move = linalg.op_norm(phi.heisenberg(x) - x)
            chain = linalg.op_norm(phi.heisenberg(x - ex) - (x - ex))
            worst_b = max(worst_b, move - chain)

            lipped = seminorm(spec, linalg.hermitian_part(phi.heisenberg(x)))
            worst_l = max(worst_l, lipped - 2 * sup_s * linalg.op_norm(x - ex))
        ok = max(worst_a, worst_b, worst_l) <= 1e-10
        return ok, {
            "worst_composition_slack": worst_a,
            "worst_universal_chain_slack": worst_b,
            "worst_lip_bound_slack": worst_l,
            "tolerance": 1e-10,
            "instances": 500,
        }

    return _timed(8, "pointwise-inequalities", body)


# ---------------------------------------------------------------------------
# criterion 9: tensor additivity / maximality for depolarizing pairs


def criterion_tensor(seed: int = 0) -> CriterionResult:
    def body():
        s_local = pauli_resource()
        js = joint_resource(s_local, s_local)
        spec_joint = SeminormSpec(js)
        ctx_joint = build_context(spec_joint)
        eye2 = np.eye(2, dtype=complex)
        lifted_specs = (
            SeminormSpec(ResourceSet(4, [np.kron(e, eye2) for e in s_local.elements])),
            SeminormSpec(ResourceSet(4, [np.kron(eye2, e) for e in s_local.elements])),
        )
        # the exact level-1 local witness: the symmetric Bloch corner
        t = 1.0 / (2.0 * math.sqrt(2.0))
        f_local = linalg.pauli_compose(0.0, t, t, t)

        rows = []
        ok = True
        for p, q in ((0.1, 0.1), (0.25, 0.25), (0.5, 0.5), (0.75, 0.75), (0.3, 0.7)):
            chp, chq = depolarizing_channel(2, p), depolarizing_channel(2, q)
            joint = tensor_channel(chp, chq)
            local_sum = (p + q) * KAPPA_PAULI

            F = tensor_witness(f_local, f_local)
            sn = seminorm(spec_joint, F)
            witness_val = linalg.op_norm(linalg.hermitian_part(joint.heisenberg(F)) - F) / sn
            super_ok = witness_val >= local_sum - 1e-6
            sn_max_ok = abs(sn - max(seminorm(SeminormSpec(s_local), f_local), seminorm(SeminormSpec(s_local), f_local))) <= 1e-10

            rep = cost(
                joint,
                spec_joint,
                options=AscentOptions(restarts=64, iterations=300),
                seed=seed,
                extra_witnesses=[F],
                context=ctx_joint,
            )
            lifted_sum = 0.0
            for lifted_spec, ch_loc, pos in ((lifted_specs[0], chp, 0), (lifted_specs[1], chq, 1)):
                lifted = tensor_channel(ch_loc, identity_channel(2)) if pos == 0 else tensor_channel(identity_channel(2), ch_loc)
                rep_l = cost(
                    lifted,
                    lifted_spec,
                    options=AscentOptions(restarts=32, iterations=220),
                    seed=seed,
                    extra_witnesses=None if rep.witness is None else [rep.witness],
                )
                lifted_sum += rep_l.lower
            sub_ok = rep.lower <= lifted_sum * 1.02

            rep_lip = lip(joint, spec_joint, options=AscentOptions(restarts=48, iterations=250), seed=seed, context=ctx_joint)
            lip_target = max(1 - p, 1 - q)
            max_ok = abs(rep_lip.lower - lip_target) <= 0.02 * lip_target

            good = super_ok and sn_max_ok and sub_ok and max_ok
            ok = ok and good
            rows.append(
                {"p": p, "q": q, "witness_value": witness_val, "local_sum_level1": local_sum,
                 "joint_ascent": rep.lower, "lifted_sum": lifted_sum, "joint_lip": rep_lip.lower,
                 "lip_target": lip_target, "ok": good}
            )
        return ok, {"rows": rows}

    return _timed(9, "tensor-additivity-maximality", body)


# ---------------------------------------------------------------------------
# criterion 10: conjugation cost below the SU(2) geodesic distance


def criterion_cc_bound(seed: int = 0) -> CriterionResult:
    def body():
        rng = np.random.default_rng([10, seed & 0xFFFFFFFF])
        ctx = build_context(su2_l2_spec())
        violations = 0
        min_margin = math.inf
        for k in range(100):
            rep = verify_cc_bound(random_su2(rng), seed=k, context=ctx, tol=1e-6)
            min_margin = min(min_margin, rep["margin"])
            if not rep["ok"]:
                violations += 1
        return violations == 0, {"samples": 100, "violations": violations, "min_margin": min_margin}

    return _timed(10, "conjugation-distance-bound", body)


# ---------------------------------------------------------------------------
# criterion 11: mixing hierarchy and the Lipschitz/cost bridge


def criterion_mixing(seed: int = 0) -> CriterionResult:
    def body():
        spec = SeminormSpec(pauli_resource())
        ctx = build_context(spec)
        efix = conditional_expectation(pauli_resource())
        opts = AscentOptions(restarts=16, iterations=100, polish_rounds=6)
        kappa = expected_length(spec.resource, options=opts, seed=seed, context=ctx)
        rows = []
        ok = True
        for p in np.arange(0.1, 0.95, 0.1):
            p = float(p)
            ch = depolarizing_channel(2, p)
            lip_val = 1.0 - p
            bridge = lip_cost_bridge_check(ch, spec, options=opts, seed=seed, context=ctx)
            bridge_ok = bridge["ok"] and bridge["equality_gap"] <= 1e-6
            for eps in (0.1, 0.01):
                tm = trace_mixing_time(ch, eps, cap=600, seed=seed)
                oracle = math.ceil(math.log(1 / eps) / (-math.log(1 - p)))
                tmc = cost_mixing_time(ch, spec, eps, cap=600, options=opts, seed=seed, context=ctx, kappa_report=kappa)
                tr = return_time(ch, efix, eps, cap=600)
                hier_ok = tmc <= tm.t_mix <= tr
                trace_ok = abs(tm.t_mix - oracle) <= 1
                prop_ok = tmc <= math.ceil(math.log(1 / eps) / (-math.log(lip_val))) + 1e-9
                good = hier_ok and trace_ok and prop_ok and bridge_ok
                ok = ok and good
                rows.append(
                    {"p": p, "eps": eps, "t_cost": tmc, "t_mix": tm.t_mix, "t_ret": tr,
                     "oracle": oracle, "bridge_gap": bridge["equality_gap"], "ok": good}
                )
        return ok, {"grid": rows}

    res = _timed(11, "mixing-hierarchy-bridge", body)
    res.details["runtime_bound_s"] = 60.0
    res.passed = res.passed and res.elapsed < 60.0
    return res


# ---------------------------------------------------------------------------
# criterion 12: analytic calculus checks


def criterion_entropy_calculus(seed: int = 0) -> CriterionResult:
    def body():
        rng = np.random.default_rng([12, seed & 0xFFFFFFFF])
        worst_deriv = 0.0
        for _ in range(20):
            d = int(rng.integers(2, 5))
            rho = linalg.random_mixed_state(rng, d, floor=0.05)
            sig = linalg.random_mixed_state(rng, d, floor=0.05)
            dr = linalg.random_hermitian(rng, d)
            dr -= np.trace(dr).real / d * np.eye(d)
            dr /= linalg.op_norm(dr)
            t = 1e-4
            fd = (relative_entropy(rho + t * dr, sig) - relative_entropy(rho - t * dr, sig)) / (2 * t)
            worst_deriv = max(worst_deriv, abs(entropy_derivative(rho, dr, sig) - fd))

        worst_ratio = math.inf
        for _ in range(10):
            d = int(rng.integers(2, 4))
            sig = linalg.random_mixed_state(rng, d, floor=0.25)
            X = linalg.random_hermitian(rng, d)
            X -= np.trace(X).real / d * np.eye(d)
            X /= linalg.op_norm(X)
            quad = float(np.trace(X @ gamma_sigma_inverse(sig, X)).real)
            errs = []
            for eps in (1e-2, 5e-3, 2.5e-3):
                errs.append(abs(relative_entropy(_as_state(sig + eps * X), sig) - eps**2 * quad))
            worst_ratio = min(worst_ratio, errs[0] / errs[1], errs[1] / errs[2])

        worst_pinsker = -math.inf
        for _ in range(1000):
            d = int(rng.integers(2, 4))
            rho = linalg.random_mixed_state(rng, d, floor=1e-3)
            sig = linalg.random_mixed_state(rng, d, floor=1e-3)
            D = relative_entropy(rho, sig)
            t1 = linalg.trace_norm(rho - sig)
            lo = 0.5 * t1**2
            hi = float(np.linalg.eigvalsh(rho)[-1] / np.linalg.eigvalsh(sig)[0]) * t1
            worst_pinsker = max(worst_pinsker, lo - D, D - hi)
        ok = worst_deriv <= 1e-5 and worst_ratio >= 3.5 and worst_pinsker <= 1e-10
        return ok, {
            "worst_derivative_error": worst_deriv,
            "min_quadratic_shrink_ratio": worst_ratio,
            "worst_pinsker_slack": worst_pinsker,
        }

    return _timed(12, "entropy-calculus", body)


def _as_state(M: np.ndarray) -> np.ndarray:
    M = linalg.hermitian_part(M)
    return M / np.trace(M).real


# ---------------------------------------------------------------------------
# criterion 13: index formulas and the sampled lower bound


def criterion_index(seed: int = 0) -> CriterionResult:
    def body():
        rows = []
        ok = True
        for d in (2, 3, 4):
            E = conditional_expectation(gell_mann_resource(d) if d != 2 else pauli_resource())
            rep = index(E, [(1, d)], samples=2000, seed=seed)
            good = rep.formula_value == d and rep.formula_cb == d * d and rep.numeric_lower <= d + 1e-8
            ok = ok and good
            rows.append({"case": f"scalars-in-M{d}", "formula": rep.formula_value,
                         "formula_cb": rep.formula_cb, "numeric_lower": rep.numeric_lower, "ok": good})
        eye = ConditionalExpectation(2, [b for b in linalg.hermitian_basis(2)])
        rep = index(eye, [(2, 1)], samples=500, seed=seed)
        good = rep.formula_value == 1 and rep.numeric_lower <= 1 + 1e-8
        ok = ok and good
        rows.append({"case": "identity-on-M2", "formula": rep.formula_value,
                     "numeric_lower": rep.numeric_lower, "ok": good})
        Ediag = conditional_expectation(ResourceSet(2, [linalg.PAULI_Z]))
        rep = index(Ediag, [(1, 1), (1, 1)], samples=2000, seed=seed)
        good = rep.formula_value == 2 and rep.numeric_lower <= 2 + 1e-8
        ok = ok and good
        rows.append({"case": "diagonal-of-M2", "formula": rep.formula_value,
                     "numeric_lower": rep.numeric_lower, "ok": good})
        return ok, {"rows": rows}

    return _timed(13, "conditional-expectation-index", body)


# ---------------------------------------------------------------------------
# suites


ALL_CRITERIA = [
    criterion_word_length,
    criterion_pauli_closed_form,
    criterion_depolarizing_exactness,
    criterion_lambda2,
    criterion_entropy_contraction,
    criterion_logratio_function,
    criterion_duality,
    criterion_pointwise_inequalities,
    criterion_tensor,
    criterion_cc_bound,
    criterion_mixing,
    criterion_entropy_calculus,
    criterion_index,
]

SUITES = {
    "group": [criterion_word_length],
    "cost": [
        criterion_pauli_closed_form,
        criterion_duality,
        criterion_pointwise_inequalities,
        criterion_tensor,
        criterion_index,
    ],
    "lip": [criterion_depolarizing_exactness],
    "entropy": [
        criterion_lambda2,
        criterion_entropy_contraction,
        criterion_logratio_function,
        criterion_entropy_calculus,
    ],
    "geometry": [criterion_cc_bound],
    "mixing": [criterion_mixing],
}


def run_suite(name: str, seed: int = 0) -> list[CriterionResult]:
    if name == "all":
        fns = ALL_CRITERIA
    elif name in SUITES:
        fns = SUITES[name]
    else:
        raise ValueError(f"unknown suite '{name}' (choose all|{'|'.join(SUITES)})")
    return [fn(seed=seed) for fn in fns]
