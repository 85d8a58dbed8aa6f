"""
Fuzzy boundedness: certificates, the two equivalent formulations, scale invariance,
independence constants, linear combinations, and the finite-dimensional sweep.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any

import numpy as np

from ..operator_analysis import (
    bounded_certificate,
    boundedness_ratios,
    defn_equivalence_check,
    finite_dim_boundedness_sweep,
    independence_constant,
    independence_inequality_check,
    subspace_check,
)
from ..operator_norm import g_alpha_closed_form
from ..reports import ReportRecord, verdict_of
from ._common import control_record

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "op-bound"
CLOSED_FORM_TOL = 1e-6
SCALE_TOL = 1e-6


def _closed_form_M(T: Any, alphas: tuple[float, ...]) -> list[float]:
    with np.errstate(divide="ignore", invalid="ignore"):
        g = g_alpha_closed_form(T, np.asarray(alphas)) / T.K
    return [float(v) if np.isfinite(v) else math.inf for v in g]


def op_bound_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    tol = ctx.config.tolerance
    alphas = ctx.alpha_grid
    records = []
    certificates = {}

    for item in params.get("operators", []):
        name, expected = item["name"], bool(item.get("bounded", True))
        T = ctx.config.operator(name)
        cert = bounded_certificate(T, alphas, ctx.sphere_samples, ctx.seed)
        certificates[name] = (T, cert)
        expected_M = _closed_form_M(T, alphas)
        errors = [
            abs(cert.M(a) - m) / max(1.0, m) if math.isfinite(m) else (0.0 if math.isinf(cert.M(a)) else math.inf)
            for a, m in zip(alphas, expected_M)
        ]
        worst = max(errors)
        records.append(
            ctx.record(
                f"boundedness-certificate[{name}]",
                "fuzzy-boundedness",
                verdict_of(cert.bounded == expected and worst <= CLOSED_FORM_TOL),
                parameters={"operator": name, "expected_bounded": expected, "sphere_samples": cert.sphere_samples},
                values={"bounded": cert.bounded, "M": cert.as_dict()["entries"], "closed_form_M": expected_M, "worst_closed_form_error": worst},
                witness=[e.as_dict() for e in cert.entries if e.unbounded] or None,
                tolerance=CLOSED_FORM_TOL,
            )
        )
        finite = [(a, cert.M(a)) for a in alphas if math.isfinite(cert.M(a))]
        ctx.plot(f"M_alpha_{name}", [a for a, _ in finite], [m for _, m in finite])

        eq = defn_equivalence_check(T, cert, ctx.config.samples.pairs, ctx.seed, tol)
        records.append(
            ctx.record(
                f"boundedness-equivalence[{name}]",
                "boundedness-equivalence",
                verdict_of(eq.passed),
                parameters={"operator": name, "samples": ctx.config.samples.pairs},
                values={
                    "consistent": eq.consistent,
                    "checked_alphas": [p["alpha"] for p in eq.per_alpha],
                    "worst_forward": max((p["forward_violation"] for p in eq.per_alpha), default=0.0),
                    "worst_reverse": max((p["reverse_violation"] for p in eq.per_alpha), default=0.0),
                },
                witness=next((p for p in eq.per_alpha if not (p["forward_passed"] and p["reverse_passed"])), None),
                tolerance=tol,
            )
        )

        if cert.bounded:
            records.append(_scale_record(ctx, name, T, params.get("scale_factors", [0.01, 3.0, 100.0])))

    control = params.get("halved_control")
    if control:
        T, cert = certificates.get(control) or (ctx.config.operator(control), None)
        cert = cert or bounded_certificate(T, alphas, ctx.sphere_samples, ctx.seed)
        halved = {e.alpha: 0.5 * e.M for e in cert.entries if not e.unbounded and e.M > 0}
        eq = defn_equivalence_check(T, cert, ctx.config.samples.pairs, ctx.seed, tol, bounds=halved)
        bad = [p for p in eq.per_alpha if not (p["forward_passed"] and p["reverse_passed"])]
        records.append(
            control_record(
                ctx,
                f"boundedness-halved-control[{control}]",
                "boundedness-equivalence",
                bool(bad) and len(bad) == len(halved),
                {"alphas_with_witness": [p["alpha"] for p in bad], "halved_alphas": sorted(halved)},
                bad[0] if bad else None,
                tol,
                {"operator": control},
            )
        )

    for name in params.get("independence_spaces", []):
        sp = ctx.config.space(name)
        eye = np.eye(sp.dimension)
        for alpha in params.get("lemma_alphas", [0.5]):
            records.extend(_independence_records(ctx, name, sp, eye, float(alpha), tol))

    for pair in params.get("subspace_pairs", []):
        T1, T2 = ctx.config.operator(pair["first"]), ctx.config.operator(pair["second"])
        k1, k2 = float(pair["k1"]), float(pair["k2"])
        verdict = subspace_check(T1, T2, k1, k2, alphas, ctx.sphere_samples, ctx.seed, ctx.config.samples.pairs)
        records.append(
            ctx.record(
                f"bounded-subspace[{pair['first']}+{pair['second']}]",
                "bounded-subspace",
                verdict_of(verdict.passed),
                parameters={"first": pair["first"], "second": pair["second"], "k1": k1, "k2": k2},
                values={"entries": verdict.entries, "sum_inequality_violation": verdict.sum_violation},
                witness=verdict.sum_witness or next((e for e in verdict.entries if e["status"] == "fail"), None),
                tolerance=1e-8,
            )
        )

    for sweep in params.get("sweeps", []):
        X, Y = ctx.config.space(sweep["domain"]), ctx.config.space(sweep["codomain"])
        report = finite_dim_boundedness_sweep(X, Y, ctx.config.samples.fleet, ctx.seed, alphas, ctx.sphere_samples)
        records.append(
            ctx.record(
                f"finite-dimensional-sweep[{sweep['domain']}->{sweep['codomain']}]",
                "finite-dimensional-boundedness",
                report.status,
                parameters={"domain": sweep["domain"], "codomain": sweep["codomain"], "operators": ctx.config.samples.fleet},
                values=report.as_dict(),
                witness=report.unbounded or None,
            )
        )
    return records


def _scale_record(ctx: SuiteContext, name: str, T: Any, factors: list[float]) -> ReportRecord:
    """B(cx, α) = B(x, α) for every c ≠ 0."""
    rng = np.random.default_rng(ctx.seed)
    xs = rng.standard_normal((8, T.domain.dimension))
    worst, witness = 0.0, None
    for alpha in ctx.alpha_grid:
        base = boundedness_ratios(T, xs, alpha)
        for c in factors:
            scaled = boundedness_ratios(T, c * xs, alpha)
            finite = np.isfinite(base) & np.isfinite(scaled)
            err = np.where(finite, np.abs(scaled - base) / np.maximum(1.0, np.abs(base)), np.where(base == scaled, 0.0, np.inf))
            i = int(np.argmax(err))
            if err[i] > worst:
                worst, witness = float(err[i]), {"alpha": alpha, "c": c, "x": xs[i].tolist()}
    return ctx.record(
        f"boundedness-scale-invariance[{name}]",
        "fuzzy-boundedness",
        verdict_of(worst <= SCALE_TOL),
        parameters={"operator": name, "factors": factors},
        values={"worst_relative_change": worst},
        witness=witness if worst > SCALE_TOL else None,
        tolerance=SCALE_TOL,
    )


def _independence_records(ctx: SuiteContext, name: str, sp: Any, basis: np.ndarray, alpha: float, tol: float) -> list[ReportRecord]:
    ic = independence_constant(sp, basis, alpha)
    # standard basis, Euclidean carrier: the ℓ¹-sphere minimum of ‖β‖ is k^{-1/2}
    k = basis.shape[0]
    expected = float(sp.profile.quantile(1.0 - alpha)) * k ** (-0.5 * sp.exponent) / float(sp.K)
    closed_err = abs(ic.value - expected) / max(1.0, expected)
    lemma = independence_inequality_check(ic, ctx.config.samples.lemma, ctx.seed, tol)
    inflated = independence_inequality_check(ic, ctx.config.samples.lemma, ctx.seed, tol, constant=2.0 * ic.value)
    label = f"{name},alpha={alpha:g}"
    return [
        ctx.record(
            f"independence-constant[{label}]",
            "independence-constant",
            verdict_of(ic.value > 0 and lemma.passed and closed_err <= CLOSED_FORM_TOL),
            parameters={"space": name, "alpha": alpha, "samples": lemma.samples, "grid_resolution": ic.grid_resolution},
            values={"c_alpha": ic.value, "closed_form": expected, "closed_form_error": closed_err, "minimizer": list(ic.minimizer), "worst_violation": lemma.worst_violation},
            witness=lemma.witness,
            tolerance=tol,
        ),
        control_record(
            ctx,
            f"independence-inflated-control[{label}]",
            "independence-constant",
            not inflated.passed,
            {"constant": 2.0 * ic.value, "worst_violation": inflated.worst_violation},
            inflated.witness,
            tol,
            {"space": name, "alpha": alpha},
        ),
    ]
