"""
Operator fuzzy norm: closed forms, the g(α) profile, norm axioms over a fleet, and hypothesis gates.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..exceptions import PreconditionError
from ..operator_analysis import LinearOperator
from ..operator_norm import DEFAULT_ALPHA_TOL, NormEvaluator, check_norm_preconditions, opnorm_axiom_check, operator_norm_profile
from ..reports import ReportRecord, verdict_of
from ._common import axiom_record

if TYPE_CHECKING:
    from ..ops import SuiteContext

NAME = "op-norm"
ANCHOR = "operator-fuzzy-norm"


def _fleet(space, size: int, seed: int) -> list[LinearOperator]:
    rng = np.random.default_rng(seed)
    n = space.dimension
    fleet = [LinearOperator.identity(space, name="I"), LinearOperator.zero(space)]
    fleet += [LinearOperator(0.5 * rng.standard_normal((n, n)), space, space, f"fleet[{i}]") for i in range(max(0, size - 2))]
    return fleet


def op_norm_suite(ctx: SuiteContext) -> list[ReportRecord]:
    params = ctx.params(NAME)
    alpha_tol = float(params.get("alpha_tol", DEFAULT_ALPHA_TOL))
    sphere = int(params.get("sphere_samples", 32))
    tol = ctx.config.tolerance
    records = []

    for name in params.get("precondition_cases", []):
        T = ctx.config.operator(name)
        try:
            check_norm_preconditions(T)
        except PreconditionError as e:
            records.append(ctx.record(f"norm-preconditions[{name}]", ANCHOR, "precondition-unmet", {"operator": name}, {"reason": str(e)}))
        else:
            records.append(ctx.record(f"norm-preconditions[{name}]", ANCHOR, "pass", {"operator": name}, {"reason": "hypotheses hold"}))

    sp = ctx.config.space(params.get("space", "r2"))
    identity = LinearOperator.identity(sp, name="I")
    s_values = np.asarray(params.get("s_values", [0.5, 1.0, 3.0]), dtype=float)
    got = NormEvaluator(identity, sphere, ctx.seed).norm(s_values, alpha_tol)
    want = s_values / (1.0 + s_values)
    err = float(np.max(np.abs(got - want)))
    ctx.plot("N_s_identity", s_values, got)
    records.append(
        ctx.record(
            "operator-norm-identity",
            ANCHOR,
            verdict_of(err <= alpha_tol),
            parameters={"space": sp.name, "s": s_values.tolist()},
            values={"N": got.tolist(), "closed_form": want.tolist(), "worst_error": err},
            tolerance=alpha_tol,
        )
    )

    zero = LinearOperator.zero(sp)
    zero_vals = NormEvaluator(zero, sphere, ctx.seed).norm(np.concatenate([s_values, [-1.0, 0.0]]), alpha_tol)
    records.append(
        ctx.record(
            "operator-norm-zero",
            ANCHOR,
            verdict_of(bool(np.all(zero_vals[:-2] == 1.0) and np.all(zero_vals[-2:] == 0.0))),
            parameters={"space": sp.name, "s": [*s_values.tolist(), -1.0, 0.0]},
            values={"N": zero_vals.tolist()},
            tolerance=0.0,
        )
    )

    fleet = _fleet(sp, int(params.get("fleet_size", 15)), ctx.seed)
    worst_closed, monotone = 0.0, True
    for T in fleet:
        profile = operator_norm_profile(T, ctx.alpha_grid, sphere, ctx.seed)
        worst_closed = max(worst_closed, profile.closed_form_error)
        monotone = monotone and profile.monotone
        if T.name == "I":
            ctx.plot("g_alpha_identity", profile.alphas, profile.g)
    records.append(
        ctx.record(
            "operator-norm-profile",
            ANCHOR,
            verdict_of(monotone and worst_closed <= 1e-6),
            parameters={"space": sp.name, "operators": len(fleet)},
            values={"monotone": monotone, "worst_closed_form_error": worst_closed},
            tolerance=1e-6,
        )
    )

    s_grid = params.get("s_grid", [0.25, 0.5, 1.0, 2.0, 4.0])
    report = opnorm_axiom_check(
        fleet,
        params.get("scalars", [2.0, 3.0, 0.5]),
        s_grid,
        ctx.seed,
        alpha_tol,
        sphere,
        tol,
        pair_count=params.get("pair_count"),
        alpha_grid=ctx.alpha_grid,
    )
    records.append(axiom_record(ctx, f"operator-norm-axioms[{sp.name}]", ANCHOR, report, tol, {"operators": len(fleet), "s_grid": s_grid}))

    scaling = params.get("scaling_space")
    if scaling:
        sp2 = ctx.config.space(scaling)
        report = opnorm_axiom_check(
            _fleet(sp2, 6, ctx.seed),
            params.get("scalars", [2.0, 3.0, 0.5]),
            s_grid,
            ctx.seed,
            alpha_tol,
            sphere,
            tol,
            axioms=("NIII", "g-monotone"),
            alpha_grid=ctx.alpha_grid,
        )
        records.append(axiom_record(ctx, f"operator-norm-scaling[{scaling}]", ANCHOR, report, tol, {"exponent": sp2.exponent, "s_grid": s_grid}))
    return records
